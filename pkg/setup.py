from setuptools import setup, find_packages

setup(
    name="acsbundle",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    py_modules=["cli"],
    install_requires=[
        "numpy",
        "galois",
    ],
    extras_require={
        "test": ["sympy"],
    },
)

# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

from os.path import abspath, dirname, join
from setuptools import setup, find_packages

CUR_DIR = dirname(abspath(__file__))
VERSION_FILE = join(CUR_DIR, "rankerg", "version.py")


def get_version():
    with open(VERSION_FILE) as f:
        for line in f.readlines():
            if line.startswith("__version__"):
                version = line.split()[-1].strip("\"")
                return version
        raise AttributeError("Package does not have a __version__")


def get_long_description():
    with open(join(CUR_DIR, "README.rst")) as f:
        return f.read()


setup(
    name="rankerg",
    version=get_version(),
    author="The rankerg developers",
    description="Spherical functions, ball averages and their decay on rank-one Lie groups.",
    long_description=get_long_description(),
    long_description_content_type="text/x-rst",
    packages=find_packages(exclude=["*.test"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.7",
        "joblib>=1.0",
    ],
    entry_points={
        "console_scripts": [
            "rankerg=rankerg.cli:main",
        ],
    },
    license="BSD",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ]
)

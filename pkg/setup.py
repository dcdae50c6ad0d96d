#!/usr/bin/env python
# -*- coding: utf-8 -*-
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


setup(
    name="pricecap",
    packages=["pricecap", "pricecap.contrib"],
    version="0.3.0",
    description="Option pricing for electricity spot prices under price-cap regulation",
    author="Roman Haritonov",
    author_email="reclosedev@gmail.com",
    url="https://github.com/reclosedev/pricecap",
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'tablib>=0.14',
    ],
    extras_require={
        'xls': ['xlrd>=1.0'],
    },
    tests_require=[
        'mock',
    ],
    python_requires=">=3.8",
    test_suite='tests',
    entry_points={
        'console_scripts': ['pricecap = pricecap.cli:main'],
    },
    keywords=["option pricing", "jump diffusion", "finite differences", "monte carlo",
              "electricity"],
    license="BSD License",
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python",
        "License :: OSI Approved :: BSD License",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: Implementation :: CPython",
        "Operating System :: OS Independent",
        "Topic :: Software Development :: Libraries :: Python Modules",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Office/Business :: Financial",
    ],
    long_description=open('README.rst').read()
)

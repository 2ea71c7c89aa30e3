# -*- coding: utf-8 -*-
# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from setuptools import setup

setup(
    name = 'PCSteiner.Planar',
    namespace_packages=['PCSteiner'],
    packages = ['PCSteiner.Planar'],
    version = '0.3.0',
    description = 'Prize-collecting Steiner tree and forest algorithms for planar graphs',
    author = 'PCSteiner contributors',
    install_requires = ['toml', 'networkx', 'numpy', 'scipy'],
    extras_require = {
        'svg': ['matplotlib'],
        'test': ['pytest', 'mock'],
    },
    entry_points = {
        'console_scripts': ['pcsteiner=PCSteiner.Planar.CLI:main'],
    },
    license = 'MIT License',
    long_description = open('README.rst').read(),
    long_description_content_type="text/x-rst",
    include_package_data = True,
    python_requires = '>=3.8',
    keywords = 'steiner tree forest prize-collecting planar graph approximation',
    classifiers = [
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics'
    ]
)

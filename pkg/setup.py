#!/usr/bin/env python

# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from setuptools import setup

setup(name='bnplogit',
      version='0.1',
      description='Bayesian nonparametric mixed logit estimation',
      url='https://github.com/bnplogit/bnplogit',
      packages=['bnplogit'],
      package_data={'bnplogit': ['testdata/*']},
      python_requires='>=3.5',
      install_requires=['numpy>=1.17', 'scipy>=1.4'],
      entry_points={'console_scripts': ['bnplogit=bnplogit.cli:Main']})

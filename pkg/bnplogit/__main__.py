# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

import sys

from .cli import Main

sys.exit(Main())

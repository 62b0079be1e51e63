# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

import hashlib
import json
import os
import tempfile
import threading

from .messages import BnpJsonEncoder

from typing import Any, Dict, Optional  # noqa: F401

# A key/value store for finished experiment cells. Keys are arbitrary
# JSON-serialisable descriptions of a cell (experiment, design, n, seed and
# configuration); values are text, usually a JSON summary.


def StableKey(description):
    # type: (Any) -> str
    """SHA-1 of the canonical JSON form of |description|."""
    canonical = json.dumps(description,
                           sort_keys=True,
                           separators=(',', ':'),
                           cls=BnpJsonEncoder)
    return hashlib.sha1(canonical.encode('utf-8')).hexdigest()


class ResultCache(object):
    def __init__(self, cache_dir=None):
        # type: (Optional[str]) -> None

        # Protects |self.store| and the files under |self.cache_dir|.
        self.lock = threading.Lock()

        # Dictionary mapping a stable key to the stored text.
        self.store = {}  # type: Dict[str, str]

        # Directory holding one file per key. If |cache_dir| is None, entries
        # only live in memory.
        self.cache_dir = cache_dir

        if cache_dir and not os.path.exists(cache_dir):
            os.makedirs(cache_dir)

    def _path_for(self, key):
        return os.path.join(self.cache_dir, key + '.json')

    def Put(self, description, data):
        # type: (Any, str) -> None
        """Stores |data| as the result of the cell |description|."""
        key = StableKey(description)
        with self.lock:
            self.store[key] = data
            if not self.cache_dir:
                return
            # Write then rename so that an interrupted run never leaves a
            # truncated entry behind.
            fd, temporary = tempfile.mkstemp(dir=self.cache_dir,
                                             suffix='.tmp')
            try:
                with os.fdopen(fd, 'w') as f:
                    f.write(data)
                os.replace(temporary, self._path_for(key))
            except BaseException:
                os.unlink(temporary)
                del self.store[key]
                raise

    def Get(self, description):
        # type: (Any) -> Optional[str]
        """Returns the stored result for |description|, or None."""
        key = StableKey(description)
        with self.lock:
            if key in self.store:
                return self.store[key]
            if not self.cache_dir:
                return None
            path = self._path_for(key)
            if not os.path.exists(path):
                return None
            with open(path, 'r') as f:
                data = f.read()
            self.store[key] = data
            return data

    def Clear(self):
        """Forgets every entry, including those on disk."""
        with self.lock:
            self.store.clear()
            if not self.cache_dir:
                return
            for entry in os.listdir(self.cache_dir):
                if entry.endswith('.json'):
                    os.remove(os.path.join(self.cache_dir, entry))

"""SMS sparse-matrix text interchange format.

Header line ``nrows ncols M``, one ``i j v`` triple per line with
1-based indices, terminated by ``0 0 0``.  This is the format consumed
by the usual exact sparse solvers.
"""

from __future__ import annotations

import numpy as np

from .linalg import SparseMatrix


def write_sms(M, path):
    """Write a SparseMatrix (or dense array) to `path` in SMS format."""
    if not isinstance(M, SparseMatrix):
        A = np.asarray(M)
        rows = ({int(c): int(v) for c, v in enumerate(row) if v}
                for row in A)
        M = SparseMatrix.from_rows(rows, A.shape[1] if A.ndim == 2 else 0)
    with open(path, "w") as fh:
        fh.write(f"{M.nrows} {M.ncols} M\n")
        for r in range(M.nrows):
            cols, vals = M.row(r)
            for c, v in zip(cols, vals):
                fh.write(f"{r + 1} {c + 1} {v}\n")
        fh.write("0 0 0\n")


def read_sms(path):
    """Read an SMS file into a SparseMatrix."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[2] != "M":
            raise ValueError(f"not an SMS header: {header!r}")
        nrows, ncols = int(header[0]), int(header[1])
        ii, jj, vv = [], [], []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            i, j, v = int(parts[0]), int(parts[1]), int(parts[2])
            if i == 0 and j == 0 and v == 0:
                break
            ii.append(i - 1)
            jj.append(j - 1)
            vv.append(v)
    return SparseMatrix.from_triplets(ii, jj, vv, nrows, ncols)


class SmsSpillWriter:
    """Streams matrix rows to disk for builds too large to keep in memory.

    Triples are appended to a scratch file as rows arrive; `finalize`
    assembles the SMS file once the row count is known.
    """

    def __init__(self, path):
        self.path = str(path)
        self._tmp = self.path + ".part"
        self._fh = open(self._tmp, "w")
        self._nrows = 0

    def write_row(self, items):
        self._nrows += 1
        r = self._nrows
        for c, v in items:
            self._fh.write(f"{r} {c + 1} {v}\n")

    def finalize(self, ncols):
        self._fh.close()
        with open(self.path, "w") as out:
            out.write(f"{self._nrows} {ncols} M\n")
            with open(self._tmp) as tmp:
                for line in tmp:
                    out.write(line)
            out.write("0 0 0\n")
        import os
        os.remove(self._tmp)
        return self.path

"""Self-describing text container for grid fields.

Layout::

    # shellframes field v1
    name: eps0
    rank: tensor2sym
    dims: 16 16
    domain: 0.0 6.283185307179586 0.0 6.283185307179586
    periodic: 1 1
    ---
    <one line per grid point, row-major over (i1, i2), components separated by spaces>

Numbers are written with ``repr`` so reading back is bit-exact.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FieldFileError

MAGIC = "# shellframes field v1"
RANKS = {"scalar": 1, "vector2": 2, "tensor2sym": 3, "tensor2": 4}


@dataclass(frozen=True, eq=False)
class FieldFile:
    name: str
    rank: str
    values: np.ndarray  # component axes first: (), (2,), (2, 2) then (n1, n2)
    domain: tuple = ((0.0, 1.0), (0.0, 1.0))
    periodic: tuple = (False, False)

    def __post_init__(self):
        if self.rank not in RANKS:
            raise FieldFileError(f"unknown rank {self.rank!r}")
        vals = np.asarray(self.values, dtype=float)
        lead = {"scalar": (), "vector2": (2,), "tensor2sym": (2, 2), "tensor2": (2, 2)}[self.rank]
        if vals.ndim != len(lead) + 2 or vals.shape[:len(lead)] != lead:
            raise FieldFileError(f"values of shape {vals.shape} do not match rank {self.rank}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_grid(cls, name, rank, values, grid):
        return cls(name, rank, values, grid.domain, grid.periodic)

    @property
    def dims(self):
        return self.values.shape[-2:]

    def records(self):
        v = self.values
        if self.rank == "scalar":
            comps = [v]
        elif self.rank == "vector2":
            comps = [v[0], v[1]]
        elif self.rank == "tensor2sym":
            comps = [v[0, 0], v[0, 1], v[1, 1]]
        else:
            comps = [v[0, 0], v[0, 1], v[1, 0], v[1, 1]]
        return np.stack([c.ravel() for c in comps], axis=-1)

    def dumps(self):
        (lo1, hi1), (lo2, hi2) = self.domain
        head = [
            MAGIC,
            f"name: {self.name}",
            f"rank: {self.rank}",
            f"dims: {self.dims[0]} {self.dims[1]}",
            f"domain: {lo1!r} {hi1!r} {lo2!r} {hi2!r}",
            f"periodic: {int(self.periodic[0])} {int(self.periodic[1])}",
            "---",
        ]
        body = [" ".join(repr(float(x)) for x in row) for row in self.records()]
        return "\n".join(head + body) + "\n"

    def write(self, path):
        Path(path).write_text(self.dumps())

    def equals(self, other):
        """Bit-exact comparison of header and values."""
        return (self.name == other.name and self.rank == other.rank
                and tuple(map(tuple, self.domain)) == tuple(map(tuple, other.domain))
                and tuple(self.periodic) == tuple(other.periodic)
                and self.values.shape == other.values.shape
                and self.values.tobytes() == other.values.tobytes())


def loads(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise FieldFileError("missing field-file header")
    try:
        sep = lines.index("---")
    except ValueError:
        raise FieldFileError("missing header terminator '---'") from None
    head = {}
    for line in lines[1:sep]:
        key, _, val = line.partition(":")
        head[key.strip()] = val.strip()
    try:
        name, rank = head["name"], head["rank"]
        n1, n2 = (int(x) for x in head["dims"].split())
        dom = [float(x) for x in head["domain"].split()]
        per = tuple(bool(int(x)) for x in head["periodic"].split())
    except (KeyError, ValueError) as exc:
        raise FieldFileError(f"bad field-file header: {exc}") from None
    if rank not in RANKS or len(dom) != 4 or len(per) != 2:
        raise FieldFileError("bad field-file header")
    ncomp = RANKS[rank]
    body = [ln for ln in lines[sep + 1:] if ln.strip()]
    if len(body) != n1 * n2:
        raise FieldFileError(f"expected {n1 * n2} records, found {len(body)}")
    try:
        rec = np.array([[float(x) for x in ln.split()] for ln in body])
    except ValueError as exc:
        raise FieldFileError(f"bad record: {exc}") from None
    if rec.shape != (n1 * n2, ncomp):
        raise FieldFileError(f"records must have {ncomp} components")
    c = [rec[:, j].reshape(n1, n2) for j in range(ncomp)]
    if rank == "scalar":
        vals = c[0]
    elif rank == "vector2":
        vals = np.stack(c)
    elif rank == "tensor2sym":
        vals = np.array([[c[0], c[1]], [c[1], c[2]]])
    else:
        vals = np.array([[c[0], c[1]], [c[2], c[3]]])
    return FieldFile(name, rank, vals, ((dom[0], dom[1]), (dom[2], dom[3])), per)


def read(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FieldFileError(f"cannot read {path}: {exc}") from None
    return loads(text)


def write(field, path):
    field.write(path)

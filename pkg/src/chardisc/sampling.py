"""Sequences of conjugacy classes, represented by torus angles, and their CSV form.

Random streams use numpy's counter-based Philox4x64 bit generator seeded through
``SeedSequence(seed)``.  Rejection proposals are drawn in fixed blocks of
``BLOCK`` rows: ``r`` uniform angles followed by one acceptance uniform per row,
so a given (group, n, seed) always yields the same bits.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SamplerStall, SequenceFormatError
from .root_system import RootSystemTables, build_tables
from .torus_chars import TWO_PI, abs_weyl_denominator, torus_point

RNG_NAME = "numpy.Philox4x64-10/SeedSequence"
BLOCK = 4096
MAX_PROPOSALS_PER_ACCEPT = 10_000
STALL_FACTOR = 20


def stall_cap(t: RootSystemTables) -> int:
    """Proposals allowed between accepts: 10^4, or 20 expected gaps when that is larger."""
    expected_gap = 4.0 ** len(t.positive_roots) / len(t.weyl)
    return max(MAX_PROPOSALS_PER_ACCEPT, math.ceil(STALL_FACTOR * expected_gap))
PROVENANCES = ("haar", "uniform_torus", "kronecker", "constant", "file")
CSV_MAGIC = "chardisc-sequence v1"


@dataclass(frozen=True)
class ClassSequence:
    group: str
    points: np.ndarray  # (n, r) angles in [0, 2pi)
    provenance: str
    seed: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] == 0:
            raise ValueError("a class sequence must be nonempty")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        pts = torus_point(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def tables(self) -> RootSystemTables:
        return build_tables(self.group)

    def __eq__(self, other):
        if not isinstance(other, ClassSequence):
            return NotImplemented
        return (
            self.group == other.group
            and self.provenance == other.provenance
            and self.seed == other.seed
            and np.array_equal(self.points, other.points)
        )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def sample_haar(t: RootSystemTables, n: int, seed: int) -> ClassSequence:
    """I.i.d. conjugacy classes under Haar measure, by rejection from uniform torus angles.

    Target density on the torus is |Delta|^2 / ((2pi)^r |W|); proposals are
    accepted with probability |Delta|^2 / 4^{|R+|}.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    envelope = 4.0 ** len(t.positive_roots)
    cap = stall_cap(t)
    accepted: list[np.ndarray] = []
    count = 0
    proposals = 0
    run = 0
    while count < n:
        block = rng.random((BLOCK, t.r + 1))
        theta = block[:, : t.r] * TWO_PI
        ok = block[:, t.r] * envelope < abs_weyl_denominator(t, theta) ** 2
        idx = np.flatnonzero(ok)
        # rejection-run length before each acceptance, for the stall guard
        gaps = np.diff(np.concatenate([[-1], idx])) - 1
        if idx.size:
            gaps[0] += run
            if gaps.max() >= cap:
                raise SamplerStall(f"more than {cap} proposals for one accept")
        take = idx[: n - count]
        if take.size:
            accepted.append(theta[take])
            count += take.size
            if count == n:
                proposals += int(take[-1]) + 1
                break
            run = BLOCK - 1 - int(idx[-1])
        else:
            run += BLOCK
            if run >= cap:
                raise SamplerStall(f"more than {cap} proposals for one accept")
        proposals += BLOCK
    pts = np.concatenate(accepted)
    return ClassSequence(
        t.group,
        pts,
        "haar",
        seed,
        {"rng": RNG_NAME, "proposals": proposals, "acceptance_rate": n / proposals},
    )


def sample_uniform_torus(t: RootSystemTables, n: int, seed: int) -> ClassSequence:
    """Uniform angles on the torus; equidistributed on T but *not* Haar on classes."""
    rng = _rng(seed)
    pts = rng.random((n, t.r)) * TWO_PI
    return ClassSequence(t.group, pts, "uniform_torus", seed, {"rng": RNG_NAME})


def kronecker_sequence(t: RootSystemTables, n: int, v) -> ClassSequence:
    """theta_i = i * v mod 2pi for i = 1..n."""
    v = np.asarray(v, dtype=float)
    if v.shape != (t.r,):
        raise ValueError(f"direction must have {t.r} entries, got shape {v.shape}")
    i = np.arange(1, n + 1, dtype=float)[:, None]
    return ClassSequence(t.group, np.mod(i * v, TWO_PI), "kronecker", None, {"v": v.tolist()})


def default_kronecker_direction(r: int) -> np.ndarray:
    """2pi times fractional parts of sqrt of the first r primes."""
    primes = (2, 3, 5, 7, 11)[:r]
    return np.array([TWO_PI * (math.sqrt(p) % 1.0) for p in primes])


def constant_sequence(t: RootSystemTables, n: int, theta) -> ClassSequence:
    if n < 1:
        raise ValueError("n must be >= 1")
    th = np.asarray(theta, dtype=float).reshape(t.r)
    return ClassSequence(t.group, np.tile(th, (n, 1)), "constant")


def write_csv(seq: ClassSequence, path: str | Path | None = None) -> str:
    """Serialize to the interchange CSV; returns the text and writes it if ``path`` is given."""
    buf = io.StringIO()
    buf.write(f"# {CSV_MAGIC}\n")
    buf.write(f"# group={seq.group}\n")
    buf.write(f"# provenance={seq.provenance}\n")
    if seq.seed is not None:
        buf.write(f"# seed={seq.seed}\n")
    if "rng" in seq.meta:
        buf.write(f"# rng={seq.meta['rng']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"theta{j + 1}" for j in range(seq.points.shape[1])])
    for row in seq.points:
        w.writerow([format(x, ".17g") for x in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(source: str | Path, group: str | None = None, *, text: str | None = None) -> ClassSequence:
    """Parse a sequence CSV.  Errors carry 1-based line and column numbers."""
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SequenceFormatError(f"{source}: cannot read ({exc.strerror})") from exc
    header: dict[str, str] = {}
    rows: list[list[float]] = []
    columns: list[str] | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
            continue
        cells = next(csv.reader([stripped]))
        if columns is None and not _is_number(cells[0]):
            columns = [c.strip() for c in cells]
            continue
        if columns is not None and len(cells) != len(columns):
            raise SequenceFormatError(
                f"{source}: line {lineno}: expected {len(columns)} columns, got {len(cells)}"
            )
        if rows and len(cells) != len(rows[0]):
            raise SequenceFormatError(
                f"{source}: line {lineno}: expected {len(rows[0])} columns, got {len(cells)}"
            )
        vals = []
        for col, cell in enumerate(cells, start=1):
            try:
                x = float(cell)
            except ValueError:
                raise SequenceFormatError(
                    f"{source}: line {lineno}, column {col}: not a number: {cell!r}"
                ) from None
            if not math.isfinite(x):
                raise SequenceFormatError(f"{source}: line {lineno}, column {col}: non-finite value")
            vals.append(x)
        rows.append(vals)
    if not rows:
        raise SequenceFormatError(f"{source}: no data rows")

    file_group = header.get("group")
    if group is not None and file_group is not None and file_group != group:
        raise SequenceFormatError(f"{source}: file is for group {file_group}, requested {group}")
    g = group or file_group
    if g is None:
        raise SequenceFormatError(f"{source}: group not given on the command line or in the header")
    t = build_tables(g)
    if len(rows[0]) != t.r:
        raise SequenceFormatError(
            f"{source}: group {g} has rank {t.r} but rows have {len(rows[0])} columns"
        )
    provenance = header.get("provenance", "file")
    if provenance not in PROVENANCES:
        raise SequenceFormatError(f"{source}: unknown provenance {provenance!r}")
    seed = header.get("seed")
    meta = {"rng": header["rng"]} if "rng" in header else {}
    return ClassSequence(g, np.array(rows), provenance, int(seed) if seed else None, meta)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True

"""Instances, assignments and load evaluation for scheduling on unrelated machines.

All quantities are exact rationals (:class:`fractions.Fraction`).  An
ineligible (machine, job) pair carries the distinguished symbol :data:`INF`;
it is never mixed into arithmetic.

Instances are stored sparsely: ``instance.times[j]`` maps each eligible
machine of job ``j`` to its (finite, positive) processing time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Sequence, Union


class BudgetExceeded(RuntimeError):
    """A search or enumeration would exceed its configured limit."""


class PreconditionViolated(ValueError):
    """An input does not satisfy an algorithm's stated precondition."""


class InstanceFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class _Infinity:
    """Marker for an infinite processing time. Supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Rational = Fraction
ProcessingTime = Union[Fraction, _Infinity]


def as_rational(value) -> Fraction:
    if isinstance(value, _Infinity):
        raise TypeError("infinite processing time used as a number")
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'a/b' string")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Largest rational g such that every value is an integer multiple of g."""
    values = [Fraction(v) for v in values]
    if not values:
        raise ValueError("gcd of an empty collection")
    lcm = math.lcm(*(v.denominator for v in values))
    g = math.gcd(*(v.numerator * (lcm // v.denominator) for v in values))
    return Fraction(g, lcm)


def common_denominator(values: Iterable[Fraction]) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


@dataclass(frozen=True, eq=False)
class Instance:
    """``m`` machines, ``n`` jobs, sparse processing times.

    ``times[j]`` is a read-only mapping ``machine -> Fraction`` holding only
    the finite entries of job ``j``.
    """

    m: int
    n: int
    times: tuple

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("an instance needs at least one machine and one job")
        if len(self.times) != self.n:
            raise ValueError(f"expected {self.n} job rows, got {len(self.times)}")
        rows = []
        for j, row in enumerate(self.times):
            clean = {}
            for i, p in sorted(dict(row).items()):
                if isinstance(p, _Infinity):
                    continue
                if not 0 <= i < self.m:
                    raise ValueError(f"job {j}: machine index {i} out of range")
                p = as_rational(p)
                if p <= 0:
                    raise ValueError(f"job {j}: processing time on machine {i} must be positive")
                clean[i] = p
            if not clean:
                raise ValueError(f"job {j} has no machine with finite processing time")
            rows.append(MappingProxyType(clean))
        object.__setattr__(self, "times", tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> "Instance":
        """Build from an m x n matrix; ``None`` or :data:`INF` mark ineligible pairs."""
        m = len(matrix)
        n = len(matrix[0])
        rows = [
            {i: matrix[i][j] for i in range(m) if matrix[i][j] is not None and matrix[i][j] is not INF}
            for j in range(n)
        ]
        return cls(m, n, tuple(rows))

    def time(self, i: int, j: int) -> ProcessingTime:
        return self.times[j].get(i, INF)

    def eligible(self, j: int) -> tuple:
        return tuple(self.times[j])

    def is_finite(self, i: int, j: int) -> bool:
        return i in self.times[j]

    def finite_times(self) -> Iterator[Fraction]:
        for row in self.times:
            yield from row.values()

    def jobs_on(self, i: int) -> list:
        """Jobs with finite processing time on machine ``i``."""
        return [j for j in range(self.n) if i in self.times[j]]

    def to_matrix(self) -> list:
        return [[self.time(i, j) for j in range(self.n)] for i in range(self.m)]

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and all(
            dict(a) == dict(b) for a, b in zip(self.times, other.times)
        )

    def __hash__(self):
        return hash((self.m, self.n, tuple(tuple(sorted(r.items())) for r in self.times)))


@dataclass(frozen=True)
class IntegralAssignment:
    machine_of: tuple

    def __post_init__(self):
        object.__setattr__(self, "machine_of", tuple(int(i) for i in self.machine_of))

    def validate(self, instance: Instance) -> None:
        if len(self.machine_of) != instance.n:
            raise PreconditionViolated("assignment length does not match job count")
        for j, i in enumerate(self.machine_of):
            if not instance.is_finite(i, j):
                raise PreconditionViolated(f"job {j} placed on ineligible machine {i}")

    def jobs_on(self, i: int) -> list:
        return [j for j, k in enumerate(self.machine_of) if k == i]


@dataclass(frozen=True)
class FractionalAssignment:
    """Sparse fractional assignment: ``x[j]`` maps machine -> positive weight.

    Zero weights are dropped on construction. No sum constraint is imposed
    here so partial assignments can be added together; see :meth:`validate`.
    """

    m: int
    n: int
    x: tuple

    def __post_init__(self):
        rows = []
        for row in self.x:
            rows.append(MappingProxyType({i: Fraction(w) for i, w in sorted(dict(row).items()) if w != 0}))
        if len(rows) != self.n:
            raise ValueError("row count does not match job count")
        object.__setattr__(self, "x", tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> "FractionalAssignment":
        m, n = len(matrix), len(matrix[0])
        return cls(m, n, tuple({i: Fraction(matrix[i][j]) for i in range(m)} for j in range(n)))

    @classmethod
    def from_integral(cls, m: int, a: IntegralAssignment) -> "FractionalAssignment":
        return cls(m, len(a.machine_of), tuple({i: Fraction(1)} for i in a.machine_of))

    def weight(self, i: int, j: int) -> Fraction:
        return self.x[j].get(i, Fraction(0))

    def to_matrix(self) -> list:
        return [[self.weight(i, j) for j in range(self.n)] for i in range(self.m)]

    def __add__(self, other: "FractionalAssignment") -> "FractionalAssignment":
        rows = []
        for a, b in zip(self.x, other.x):
            row = dict(a)
            for i, w in b.items():
                row[i] = row.get(i, 0) + w
            rows.append(row)
        return FractionalAssignment(self.m, self.n, tuple(rows))

    def is_integral(self) -> bool:
        return all(w == 1 for row in self.x for w in row.values())

    def to_integral(self) -> IntegralAssignment:
        if not self.is_integral():
            raise ValueError("assignment is not integral")
        return IntegralAssignment(tuple(next(iter(row)) for row in self.x))

    def validate(self, instance: Instance) -> None:
        if (self.m, self.n) != (instance.m, instance.n):
            raise PreconditionViolated("assignment shape does not match instance")
        for j, row in enumerate(self.x):
            for i, w in row.items():
                if not 0 < w <= 1:
                    raise PreconditionViolated(f"x[{i},{j}] = {w} outside [0, 1]")
                if not instance.is_finite(i, j):
                    raise PreconditionViolated(f"x[{i},{j}] > 0 on an infinite entry")
            if sum(row.values()) != 1:
                raise PreconditionViolated(f"job {j} is covered {sum(row.values())}, not 1")


class HalfIntegralAssignment(FractionalAssignment):
    """Every weight is 1/2 or 1; a job sits on one machine or splits across two."""

    def validate(self, instance: Instance) -> None:
        super().validate(instance)
        for j, row in enumerate(self.x):
            if any(w not in (Fraction(1, 2), 1) for w in row.values()) or len(row) > 2:
                raise PreconditionViolated(f"job {j} is not half-integral: {dict(row)}")

    def split_jobs(self) -> list:
        return [j for j, row in enumerate(self.x) if len(row) == 2]


Assignment = Union[IntegralAssignment, FractionalAssignment]


def load(instance: Instance, i: int, assignment: Assignment) -> Fraction:
    """Total processing time placed on machine ``i``."""
    if isinstance(assignment, IntegralAssignment):
        return sum((instance.times[j][i] for j, k in enumerate(assignment.machine_of) if k == i), Fraction(0))
    total = Fraction(0)
    for j, row in enumerate(assignment.x):
        w = row.get(i)
        if w:
            total += w * instance.times[j][i]
    return total


def loads(instance: Instance, assignment: Assignment) -> list:
    out = [Fraction(0)] * instance.m
    if isinstance(assignment, IntegralAssignment):
        for j, i in enumerate(assignment.machine_of):
            out[i] += instance.times[j][i]
    else:
        for j, row in enumerate(assignment.x):
            for i, w in row.items():
                out[i] += w * instance.times[j][i]
    return out


def makespan(instance: Instance, assignment: Assignment) -> Fraction:
    return max(loads(instance, assignment))


def min_load(instance: Instance, assignment: Assignment) -> Fraction:
    """Minimum over all machines, empty ones included."""
    return min(loads(instance, assignment))


# ---------------------------------------------------------------------------
# instance file format

_HEADER = "schedlab-instance 1"


def format_instance(instance: Instance) -> str:
    lines = [_HEADER, f"machines {instance.m}", f"jobs {instance.n}"]
    for j, row in enumerate(instance.times):
        entries = " ".join(f"{i}:{format_rational(p)}" for i, p in sorted(row.items()))
        lines.append(f"job {j} {entries}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_instance(text: str) -> Instance:
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError(1, "empty instance file")

    def expect(idx: int, keyword: str) -> int:
        if idx >= len(lines):
            raise InstanceFormatError(lines[-1][0], f"missing '{keyword}' line")
        lineno, line = lines[idx]
        parts = line.split()
        if len(parts) != 2 or parts[0] != keyword or not parts[1].isdigit():
            raise InstanceFormatError(lineno, f"expected '{keyword} <count>', got {line!r}")
        return int(parts[1])

    lineno, line = lines[0]
    if line.split() != _HEADER.split():
        raise InstanceFormatError(lineno, f"expected header {_HEADER!r}")
    m = expect(1, "machines")
    n = expect(2, "jobs")
    if m < 1 or n < 1:
        raise InstanceFormatError(lines[2][0], "machine and job counts must be positive")
    job_lines = lines[3:]
    if len(job_lines) != n:
        at = job_lines[n][0] if len(job_lines) > n else lines[-1][0]
        raise InstanceFormatError(at, f"expected {n} job lines, found {len(job_lines)}")

    rows: list = [None] * n
    for lineno, line in job_lines:
        parts = line.split()
        if len(parts) < 3 or parts[0] != "job" or not parts[1].isdigit():
            raise InstanceFormatError(lineno, f"expected 'job <j> <i>:<p> ...', got {line!r}")
        j = int(parts[1])
        if j >= n:
            raise InstanceFormatError(lineno, f"job index {j} out of range")
        if rows[j] is not None:
            raise InstanceFormatError(lineno, f"job {j} listed twice")
        row = {}
        for entry in parts[2:]:
            mach, sep, ptext = entry.partition(":")
            if not sep or not mach.isdigit():
                raise InstanceFormatError(lineno, f"malformed entry {entry!r}")
            i = int(mach)
            if i >= m:
                raise InstanceFormatError(lineno, f"machine index {i} out of range")
            if i in row:
                raise InstanceFormatError(lineno, f"machine {i} listed twice for job {j}")
            try:
                p = parse_rational(ptext)
            except ValueError as exc:
                raise InstanceFormatError(lineno, str(exc)) from None
            if p <= 0:
                raise InstanceFormatError(lineno, f"processing time must be positive, got {ptext}")
            row[i] = p
        rows[j] = row
    return Instance(m, n, tuple(rows))


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(instance))

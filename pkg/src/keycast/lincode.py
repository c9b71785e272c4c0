"""Scalar-linear network codes over GF(2^k) and their verification.

Every edge carries one field symbol, a fixed linear combination of the source
symbols (the *basis*).  Since the source symbols are independent and uniform,
the entropy of any family of edge messages is ``rank * k`` bits, which turns
every decoding / independence / secrecy question into a rank computation.
:func:`mutual_information` answers the same questions by brute-force
enumeration of all source assignments and is kept independent of the rank
code so the two can be cross-checked.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .field import FieldError, GF2k
from .graph import Instance

DEFAULT_MAX_ENUM = 1 << 20

Vector = tuple[int, ...]


class CodeError(ValueError):
    pass


class EnumerationCapExceeded(RuntimeError):
    pass


def max_enum() -> int:
    """Exhaustive-oracle cap on source tuples; ``KEYCAST_MAX_ENUM`` overrides."""
    raw = os.environ.get("KEYCAST_MAX_ENUM")
    return int(raw) if raw else DEFAULT_MAX_ENUM


@dataclass(frozen=True)
class LinearCode:
    basis: tuple[str, ...]
    field: GF2k
    edge_msgs: dict[int, Vector]
    keys: dict[int, Vector]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis or len(set(self.basis)) != len(self.basis):
            raise CodeError("basis names must be unique and nonempty")
        m = len(self.basis)
        msgs = {int(e): tuple(int(c) for c in v) for e, v in self.edge_msgs.items()}
        keys = {int(i): tuple(int(c) for c in v) for i, v in self.keys.items()}
        for label, table in (("edge", msgs), ("key", keys)):
            for idx, vec in table.items():
                if len(vec) != m:
                    raise CodeError(f"{label} {idx}: vector length {len(vec)} != basis size {m}")
                if any(not 0 <= c < self.field.order for c in vec):
                    raise CodeError(f"{label} {idx}: coefficient outside GF(2^{self.field.k})")
        for i, vec in keys.items():
            if not any(vec):
                raise CodeError(f"key {i} is the zero vector")
        object.__setattr__(self, "edge_msgs", msgs)
        object.__setattr__(self, "keys", keys)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "basis": list(self.basis),
            "edges": {str(e): list(v) for e, v in sorted(self.edge_msgs.items())},
            "keys": {str(i): list(v) for i, v in sorted(self.keys.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearCode":
        try:
            return cls(
                basis=tuple(data["basis"]),
                field=GF2k.from_json(data["field"]),
                edge_msgs={int(e): tuple(v) for e, v in data["edges"].items()},
                keys={int(i): tuple(v) for i, v in data["keys"].items()},
            )
        except FieldError as exc:
            raise CodeError(str(exc)) from exc
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, CodeError):
                raise
            raise CodeError(f"malformed code file: {exc}") from exc


def export_code(code: LinearCode, path) -> None:
    with open(path, "w") as fh:
        json.dump(code.to_json(), fh, indent=2)
        fh.write("\n")


def import_code(path) -> LinearCode:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CodeError(f"{path}: not valid JSON ({exc})") from exc
    return LinearCode.from_json(data)


# --- linear algebra ---------------------------------------------------------------


def row_reduce(vectors: Iterable[Sequence[int]], F: GF2k) -> list[list[int]]:
    """Echelon basis of the span; pivots are taken on the lowest column first."""
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r]
        scale = F.inv(p[col])
        p = [F.mul(scale, x) for x in p]
        rows[r] = p
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [x ^ F.mul(c, y) for x, y in zip(rows[i], p)]
        basis.append(p)
        r += 1
        if r == len(rows):
            break
    return basis


def rank(vectors: Iterable[Sequence[int]], F: GF2k) -> int:
    return len(row_reduce(vectors, F))


def entropy_bits(vectors: Iterable[Sequence[int]], F: GF2k) -> int:
    return rank(vectors, F) * F.k


def in_span(v: Sequence[int], vectors: Sequence[Sequence[int]], F: GF2k) -> bool:
    vectors = list(vectors)
    return rank(vectors + [v], F) == rank(vectors, F)


def span(vectors: Sequence[Sequence[int]], F: GF2k, m: int | None = None) -> set[Vector]:
    """All vectors in the span (enumerates q^rank elements).

    ``m`` fixes the vector length when ``vectors`` may be empty.
    """
    vectors = list(vectors)
    basis = row_reduce(vectors, F)
    if m is None:
        if not vectors:
            raise CodeError("span of no vectors needs an explicit length")
        m = len(vectors[0])
    out = {tuple([0] * m)}
    for b in basis:
        new = set()
        for v in out:
            for c in range(F.order):
                new.add(tuple(x ^ F.mul(c, y) for x, y in zip(v, b)))
        out = new
    return out


# --- verdicts ---------------------------------------------------------------------


@dataclass
class Check:
    """One verified clause; ``status`` is PASS, FAIL or SKIPPED."""

    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "FAIL"


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool | None, detail: str = "") -> Check:
        status = "SKIPPED" if ok is None else ("PASS" if ok else "FAIL")
        c = Check(name, status, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def counts(self) -> dict[str, int]:
        out = {"PASS": 0, "FAIL": 0, "SKIPPED": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "counts": self.counts(),
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks],
        }

    def to_text(self, verbose: bool = False) -> str:
        lines = []
        for c in self.checks:
            if verbose or c.status != "PASS":
                lines.append(f"{c.status:7s} {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        n = self.counts()
        lines.append(f"{n['PASS']} passed, {n['FAIL']} failed, {n['SKIPPED']} skipped")
        return "\n".join(lines)


@dataclass(frozen=True)
class LocalCheck:
    ok: bool
    edge: int | None = None


def _require_edges(instance: Instance, code: LinearCode) -> None:
    missing = [e.id for e in instance.edges if e.id not in code.edge_msgs]
    if missing:
        raise CodeError(f"code has no vector for edges {missing}")


def validate_local_computability(
    instance: Instance, code: LinearCode, partial: bool = False
) -> LocalCheck:
    """Every edge message must lie in the span of its tail's incoming messages.

    With ``partial=True`` edges absent from the code are ignored, both as
    edges to check and as inputs, which is how intermediate colorings are
    validated.
    """
    if not partial:
        _require_edges(instance, code)
    F = code.field
    for e in instance.edges_in_order:
        if e.id not in code.edge_msgs or e.tail == instance.source:
            continue
        inputs = [code.edge_msgs[x.id] for x in instance.in_edges[e.tail] if x.id in code.edge_msgs]
        if not in_span(code.edge_msgs[e.id], inputs, F):
            return LocalCheck(False, e.id)
    return LocalCheck(True)


def check_decoding(instance: Instance, code: LinearCode, d, i: int) -> bool:
    if d not in instance.terminal_set(i):
        raise CodeError(f"{d!r} is not in terminal set {i}")
    received = [code.edge_msgs[e] for e in instance.in_edge_ids(d)]
    return in_span(code.keys[i], received, code.field)


def check_pairwise_independence(code: LinearCode) -> dict[tuple[int, int], bool]:
    return {
        (i, j): rank([code.keys[i], code.keys[j]], code.field) == 2
        for i, j in combinations(sorted(code.keys), 2)
    }


def check_secrecy(instance: Instance, code: LinearCode, i: int, beta: Iterable[int]) -> bool:
    """Key ``i`` is outside the row span of the messages on ``beta``."""
    seen = [code.edge_msgs[e] for e in beta]
    return rank(seen + [code.keys[i]], code.field) == rank(seen, code.field) + 1


def mutual_information_rank(
    F: GF2k, target: Sequence[Sequence[int]], observed: Sequence[Sequence[int]]
) -> int:
    """I(target; observed) in bits for linear functions of uniform symbols."""
    t, o = list(target), list(observed)
    return (rank(t, F) + rank(o, F) - rank(t + o, F)) * F.k


# --- exhaustive oracle ----------------------------------------------------------------


def _evaluate(F: GF2k, vectors: Sequence[Sequence[int]], m: int) -> np.ndarray:
    """Values of each linear form on every source tuple: shape (q^m, len(vectors))."""
    q = F.order
    n = q**m
    cap = max_enum()
    if n > cap:
        raise EnumerationCapExceeded(
            f"{n} source tuples exceed the enumeration cap {cap}; use the rank-based checks"
        )
    # Column j holds the j-th source symbol of each tuple.
    symbols = np.indices((q,) * m).reshape(m, n) if m else np.zeros((0, 1), dtype=np.int64)
    out = np.zeros((n, len(vectors)), dtype=np.int64)
    for col, vec in enumerate(vectors):
        acc = np.zeros(n, dtype=np.int64)
        for j, c in enumerate(vec):
            if c:
                acc ^= F.scale_table(int(c))[symbols[j]]
        out[:, col] = acc
    return out


def _labels(values: np.ndarray) -> np.ndarray:
    if values.shape[1] == 0:
        return np.zeros(values.shape[0], dtype=np.int64)
    _, inv = np.unique(values, axis=0, return_inverse=True)
    return inv.reshape(-1)


def mutual_information(
    F: GF2k, target: Sequence[Sequence[int]], observed: Sequence[Sequence[int]], m: int | None = None
) -> Fraction:
    """Exact I(target; observed) in bits by enumerating every source tuple.

    Independence is decided on integer counts (``N * c(k, x) == c(k) * c(x)``
    for every cell), never on floats.
    """
    target, observed = list(target), list(observed)
    if m is None:
        m = len((target + observed)[0])
    vals = _evaluate(F, target + observed, m)
    n = vals.shape[0]
    kt = _labels(vals[:, : len(target)])
    xo = _labels(vals[:, len(target) :])
    nk, nx = int(kt.max()) + 1, int(xo.max()) + 1
    joint = np.zeros((nk, nx), dtype=np.int64)
    np.add.at(joint, (kt, xo), 1)
    ck = joint.sum(axis=1)
    cx = joint.sum(axis=0)
    if np.array_equal(joint * n, np.outer(ck, cx)):
        return Fraction(0)
    total = Fraction(0)
    ks, xs = np.nonzero(joint)
    for a, b in zip(ks.tolist(), xs.tolist()):
        c = int(joint[a, b])
        ratio = Fraction(n * c, int(ck[a]) * int(cx[b]))
        if ratio.denominator != 1 or ratio.numerator & (ratio.numerator - 1):
            raise ArithmeticError("non power-of-two likelihood ratio from a linear map")
        total += Fraction(c, n) * (ratio.numerator.bit_length() - 1)
    return total


def exhaustive_mi_oracle(instance: Instance, code: LinearCode, i: int, beta: Iterable[int]) -> Fraction:
    """Brute-force I(K_i; X_beta) in bits."""
    seen = [code.edge_msgs[e] for e in beta]
    return mutual_information(code.field, [code.keys[i]], seen, m=len(code.basis))


def oracle_feasible(code: LinearCode) -> bool:
    return code.field.order ** len(code.basis) <= max_enum()


# --- full verification ------------------------------------------------------------


def verify_code(instance: Instance, code: LinearCode, exhaustive: bool = False) -> Report:
    """Check every clause (local computability, decoding, PWI, secrecy).

    With ``exhaustive=True`` each rank verdict is repeated with
    :func:`mutual_information`; a disagreement is itself reported as a
    failure, and an over-cap basis yields SKIPPED oracle checks.
    """
    report = Report()
    _require_edges(instance, code)
    missing = [j for j in range(1, instance.num_sets + 1) if j not in code.keys]
    if missing:
        raise CodeError(f"code has no key for terminal sets {missing}")
    F, m = code.field, len(code.basis)
    use_oracle = exhaustive and oracle_feasible(code)

    def oracle(name, target, observed, expect_bits):
        if not exhaustive:
            return
        if not use_oracle:
            report.add(f"oracle {name}", None, "enumeration cap exceeded")
            return
        got = mutual_information(F, target, observed, m)
        report.add(f"oracle {name}", got == expect_bits, f"I = {got} bits, rank says {expect_bits}")

    local = validate_local_computability(instance, code)
    report.add("local computability", local.ok, "" if local.ok else f"edge {local.edge}")

    for i in range(1, instance.num_sets + 1):
        key = code.keys[i]
        for d in sorted(instance.terminal_set(i), key=str):
            ok = check_decoding(instance, code, d, i)
            report.add(f"decode K_{i} at {d}", ok)
            received = [code.edge_msgs[e] for e in instance.in_edge_ids(d)]
            oracle(f"decode K_{i} at {d}", [key], received,
                   mutual_information_rank(F, [key], received))

    for (i, j), ok in check_pairwise_independence(code).items():
        if i > instance.num_sets or j > instance.num_sets:
            continue
        report.add(f"PWI K_{i} K_{j}", ok)
        oracle(f"PWI K_{i} K_{j}", [code.keys[i]], [code.keys[j]],
               mutual_information_rank(F, [code.keys[i]], [code.keys[j]]))

    for i, sets in enumerate(instance.secrecy_sets, start=1):
        if instance.secrecy_mode == "node_eavesdropper":
            watchers = [v for v in instance.nodes
                        if v != instance.source and v not in instance.terminal_set(i)]
            labels = [f"secrecy K_{i} vs In({v})" for v in watchers]
        else:
            labels = [f"secrecy K_{i} vs edges {sorted(b)}" for b in sets]
        for label, beta in zip(labels, sets):
            ok = check_secrecy(instance, code, i, beta)
            report.add(label, ok)
            seen = [code.edge_msgs[e] for e in beta]
            oracle(label, [code.keys[i]], seen, mutual_information_rank(F, [code.keys[i]], seen))
    return report

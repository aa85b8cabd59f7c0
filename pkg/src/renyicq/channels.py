"""Generalized classical-quantum channels, input distributions, and type utilities.

Symbols are opaque string labels ordered lexicographically, which fixes the
block layout of lifted states and the column order of every emitted file.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ChannelFormatError, ResourceLimitError
from .operators import DensityOperator, HermitianOperator, herm, tensor

#: Largest operator dimension accepted from input files.
DIM_CAP = 64
#: Largest output dimension a channel product may produce.
PRODUCT_DIM_CAP = 4096
#: Largest support size for which the lifted joint state is materialized.
LIFT_ALPHABET_CAP = 16

_PROB_TOL = 1e-12


class InputDistribution:
    """Finitely supported probability vector over channel symbols."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        items = {str(k): float(v) for k, v in dict(weights).items()}
        for sym, w in items.items():
            if w < -_PROB_TOL:
                raise ValueError(f"negative probability {w} for symbol {sym!r}")
        total = sum(items.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self.weights = {k: max(items[k], 0.0) / total for k in sorted(items)}

    @classmethod
    def uniform(cls, symbols) -> "InputDistribution":
        symbols = list(symbols)
        return cls({s: 1.0 / len(symbols) for s in symbols})

    @classmethod
    def point(cls, symbol) -> "InputDistribution":
        return cls({symbol: 1.0})

    @property
    def support(self):
        return tuple(s for s, w in self.weights.items() if w > 0.0)

    def probability(self, symbol) -> float:
        return self.weights.get(str(symbol), 0.0)

    def items(self):
        return self.weights.items()

    def entropy(self) -> float:
        """Shannon entropy in nats."""
        return -sum(w * math.log(w) for w in self.weights.values() if w > 0.0)

    def __eq__(self, other):
        return isinstance(other, InputDistribution) and self.weights == other.weights

    def __repr__(self):  # pragma: no cover
        return f"InputDistribution({self.weights})"


class GcqChannel:
    """Map from a finite alphabet to PSD operators on a shared space."""

    __slots__ = ("outputs", "alphabet", "dim")

    def __init__(self, outputs):
        if not outputs:
            raise ValueError("channel needs at least one symbol")
        self.outputs = {str(k): herm(v) for k, v in dict(outputs).items()}
        self.alphabet = tuple(sorted(self.outputs))
        dims = {op.dim for op in self.outputs.values()}
        if len(dims) != 1:
            raise ValueError(f"outputs live on different dimensions: {sorted(dims)}")
        self.dim = dims.pop()
        for sym in self.alphabet:
            if not self.outputs[sym].is_psd():
                raise ValueError(f"output for symbol {sym!r} is not PSD")

    @property
    def is_cq(self) -> bool:
        """All outputs are unit trace (within 1e-10)."""
        return all(abs(op.trace() - 1.0) <= 1e-10 for op in self.outputs.values())

    def output(self, symbol) -> HermitianOperator:
        try:
            return self.outputs[str(symbol)]
        except KeyError:
            raise ValueError(f"unknown symbol {symbol!r}") from None

    def items(self):
        return ((s, self.outputs[s]) for s in self.alphabet)

    def __repr__(self):  # pragma: no cover
        return f"GcqChannel(dim={self.dim}, symbols={list(self.alphabet)})"


@dataclass(frozen=True)
class TypeClass:
    """Empirical composition of a length-n sequence."""

    n: int
    counts: tuple  # ((symbol, count), ...) sorted by symbol

    def __post_init__(self):
        if sum(c for _, c in self.counts) != self.n:
            raise ValueError("counts must sum to the blocklength")
        if any(c < 0 for _, c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_counts(cls, counts, n=None) -> "TypeClass":
        items = tuple(sorted((str(k), int(v)) for k, v in dict(counts).items() if v))
        total = sum(c for _, c in items)
        return cls(n if n is not None else total, items)

    @property
    def support(self):
        return tuple(s for s, c in self.counts if c > 0)

    @property
    def as_distribution(self) -> InputDistribution:
        return InputDistribution({s: c / self.n for s, c in self.counts if c > 0})


def type_of(sequence) -> TypeClass:
    """Empirical type of a symbol sequence."""
    seq = [str(s) for s in sequence]
    if not seq:
        raise ValueError("empty sequence has no type")
    counts = {}
    for s in seq:
        counts[s] = counts.get(s, 0) + 1
    return TypeClass.from_counts(counts)


def type_class_size(t: TypeClass):
    """Exact number of sequences with type t, with its entropy bounds.

    Returns ``(size, (lower, upper))`` where size = n!/prod(counts!) and the
    bounds are ((n+1)^-|supp| e^{nH}, e^{nH}).  Exact multinomials only, so
    n is capped at 20.
    """
    if t.n > 20:
        raise ValueError("exact multinomial evaluation is limited to n <= 20")
    size = math.factorial(t.n)
    for _, c in t.counts:
        size //= math.factorial(c)
    h = t.as_distribution.entropy()
    upper = math.exp(t.n * h)
    lower = (t.n + 1) ** (-len(t.support)) * upper
    return size, (lower, upper)


def type_mixing_check(p: InputDistribution, m: int) -> InputDistribution:
    """Mixture of empirical types of length-m sequences drawn from p^(x)m.

    Enumerates all sequences over supp p; callers assert the result equals p.
    """
    if m > 8:
        raise ValueError("exact enumeration is limited to m <= 8")
    supp = p.support
    if len(supp) > 4:
        raise ValueError("exact enumeration is limited to |supp| <= 4")
    acc = {s: 0.0 for s in supp}
    for seq in itertools.product(supp, repeat=m):
        weight = 1.0
        for s in seq:
            weight *= p.probability(s)
        t = type_of(seq)
        for sym, c in t.counts:
            acc[sym] += weight * c / m
    return InputDistribution(acc)


def average_output(w: GcqChannel, p: InputDistribution) -> HermitianOperator:
    """Sum_x p(x) W(x)."""
    acc = np.zeros((w.dim, w.dim), dtype=complex)
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        acc += prob * w.output(sym).mat
    return HermitianOperator(acc)


def lifted_state(w: GcqChannel, p: InputDistribution) -> DensityOperator:
    """Block-diagonal joint state with blocks p(x) W(x) over supp p.

    Blocks follow the lexicographic symbol order; the channel must be cq on
    the support of p.
    """
    supp = p.support
    if len(supp) > LIFT_ALPHABET_CAP:
        raise ResourceLimitError(
            f"lifting is capped at {LIFT_ALPHABET_CAP} support symbols, got {len(supp)}"
        )
    d = w.dim
    for sym in supp:
        if abs(w.output(sym).trace() - 1.0) > 1e-10:
            raise ValueError(f"channel is not cq on the support: Tr W({sym!r}) != 1")
    k = len(supp)
    out = np.zeros((k * d, k * d), dtype=complex)
    for i, sym in enumerate(supp):
        out[i * d:(i + 1) * d, i * d:(i + 1) * d] = p.probability(sym) * w.output(sym).mat
    return DensityOperator(out)


def product_channel(w1: GcqChannel, w2: GcqChannel) -> GcqChannel:
    """Channel on the cartesian alphabet with tensor-product outputs."""
    if w1.dim * w2.dim > PRODUCT_DIM_CAP:
        raise ResourceLimitError(
            f"product dimension {w1.dim * w2.dim} exceeds the cap {PRODUCT_DIM_CAP}"
        )
    outputs = {}
    for x in w1.alphabet:
        for y in w2.alphabet:
            outputs[f"({x},{y})"] = tensor(w1.output(x), w2.output(y))
    return GcqChannel(outputs)


def product_distribution(p1: InputDistribution, p2: InputDistribution) -> InputDistribution:
    return InputDistribution(
        {f"({x},{y})": wx * wy for x, wx in p1.items() for y, wy in p2.items()}
    )


# ---------------------------------------------------------------------------
# Channel JSON format
#
# { "dim": d, "symbols": [..], "outputs": {symbol: d x d rows of [re, im]},
#   "distribution": {symbol: probability} }   (distribution optional: uniform)
# ---------------------------------------------------------------------------

def channel_to_json(w: GcqChannel, p: InputDistribution | None = None) -> dict:
    doc = {
        "dim": w.dim,
        "symbols": list(w.alphabet),
        "outputs": {
            sym: [[[float(e.real), float(e.imag)] for e in row] for row in w.output(sym).mat]
            for sym in w.alphabet
        },
    }
    if p is not None:
        doc["distribution"] = {s: float(v) for s, v in p.items()}
    return doc


def channel_from_json(doc):
    """Parse the channel JSON schema into (GcqChannel, InputDistribution | None)."""
    if not isinstance(doc, dict):
        raise ChannelFormatError("expected a JSON object", field="$")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim <= 0:
        raise ChannelFormatError("'dim' must be a positive integer", field="dim")
    if dim > DIM_CAP:
        raise ResourceLimitError(f"dim {dim} exceeds the cap {DIM_CAP}")
    symbols = doc.get("symbols")
    if not isinstance(symbols, list) or not symbols:
        raise ChannelFormatError("'symbols' must be a nonempty list", field="symbols")
    outputs_doc = doc.get("outputs")
    if not isinstance(outputs_doc, dict):
        raise ChannelFormatError("'outputs' must be an object", field="outputs")
    outputs = {}
    for sym in symbols:
        sym = str(sym)
        rows = outputs_doc.get(sym)
        if rows is None:
            raise ChannelFormatError("missing output matrix", field=f"outputs.{sym}")
        mat = _parse_matrix(rows, dim, f"outputs.{sym}")
        try:
            outputs[sym] = herm(mat)
        except ValueError as exc:
            raise ChannelFormatError(str(exc), field=f"outputs.{sym}") from exc
    try:
        channel = GcqChannel(outputs)
    except ValueError as exc:
        raise ChannelFormatError(str(exc), field="outputs") from exc

    dist_doc = doc.get("distribution")
    dist = None
    if dist_doc is not None:
        if not isinstance(dist_doc, dict):
            raise ChannelFormatError("'distribution' must be an object", field="distribution")
        unknown = set(map(str, dist_doc)) - set(map(str, symbols))
        if unknown:
            raise ChannelFormatError(
                f"unknown symbols {sorted(unknown)}", field="distribution"
            )
        try:
            dist = InputDistribution(dist_doc)
        except ValueError as exc:
            raise ChannelFormatError(str(exc), field="distribution") from exc
    return channel, dist


def _parse_matrix(rows, dim, field):
    if not isinstance(rows, list) or len(rows) != dim:
        raise ChannelFormatError(f"expected {dim} rows", field=field)
    mat = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ChannelFormatError(f"expected {dim} entries", field=f"{field}[{i}]")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) for v in entry)):
                raise ChannelFormatError("expected [re, im]", field=f"{field}[{i}][{j}]")
            mat[i, j] = complex(entry[0], entry[1])
    return mat


def load_channel(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChannelFormatError(f"invalid JSON: {exc}", field=str(path)) from exc
    return channel_from_json(doc)


def save_channel(path, w: GcqChannel, p: InputDistribution | None = None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(channel_to_json(w, p), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Built-in generators
# ---------------------------------------------------------------------------

def noiseless_channel(d: int):
    """d perfectly distinguishable pure outputs with the uniform input law."""
    outputs = {}
    for i in range(d):
        mat = np.zeros((d, d), dtype=complex)
        mat[i, i] = 1.0
        outputs[str(i)] = HermitianOperator(mat)
    w = GcqChannel(outputs)
    return w, InputDistribution.uniform(w.alphabet)


def random_state(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Full-rank-by-default random state from a Ginibre factor."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    return DensityOperator(g @ g.conj().T)


def random_cq_channel(dim: int, n_symbols: int, rng: np.random.Generator):
    """Random cq channel with a random full-support input law."""
    outputs = {str(i): random_state(dim, rng) for i in range(n_symbols)}
    w = GcqChannel(outputs)
    weights = rng.dirichlet(np.ones(n_symbols))
    p = InputDistribution({str(i): weights[i] for i in range(n_symbols)})
    return w, p


def parse_preset(token: str, seed: int = 42):
    """Build a channel from a preset token.

    Grammar: ``noiseless:d``, ``random:d:k[:seed]``, or the bare word
    ``random`` (a dim-2, 3-symbol channel from the given seed).
    """
    parts = token.split(":")
    name = parts[0]
    if name == "noiseless":
        if len(parts) != 2:
            raise ChannelFormatError("expected noiseless:d", field="preset")
        return noiseless_channel(_preset_int(parts[1], "d"))
    if name == "random":
        if len(parts) == 1:
            dim, k = 2, 3
        elif len(parts) in (3, 4):
            dim, k = _preset_int(parts[1], "d"), _preset_int(parts[2], "k")
            if len(parts) == 4:
                seed = _preset_int(parts[3], "seed")
        else:
            raise ChannelFormatError("expected random:d:k[:seed]", field="preset")
        if dim > DIM_CAP:
            raise ResourceLimitError(f"dim {dim} exceeds the cap {DIM_CAP}")
        return random_cq_channel(dim, k, np.random.default_rng(seed))
    raise ChannelFormatError(f"unknown preset {name!r}", field="preset")


def _preset_int(token, what):
    try:
        value = int(token)
    except ValueError:
        raise ChannelFormatError(f"{what} must be an integer, got {token!r}",
                                 field="preset") from None
    if value <= 0:
        raise ChannelFormatError(f"{what} must be positive", field="preset")
    return value

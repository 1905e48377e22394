"""Pattern encoding and inner-product similarity.

A pattern is a small pixel grid whose values are unit modulus: +1 for a
white pixel and -1 for a black one, or e^{i theta} for a colored one
with theta = 2 pi hue (red at 0, cyan at pi).  The similarity of two
patterns is the pixel-normalized inner product

    <w|x> = (1/N_pix) sum_j conj(w_j) x_j,

which for bipolar patterns equals (N_pix - 2 N_error)/N_pix with
N_error the count of differing pixels.  Patterns embed into qubit
registers by padding with +1 up to the next power of two; that changes
the normalization by a fixed affine map, so recognition tables always
use the pixel-domain value.

The module ships the 5x4 digit corpus used in the recognition
experiments (values listed row-major, one bit per pixel, 0 = white).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ideal import QubitRegister

__all__ = [
    "Pattern",
    "PatternSet",
    "SimilarityMatrix",
    "pixel_inner",
    "pixel_inner_exact",
    "n_error",
    "encode_pattern",
    "similarity_matrix",
    "recognize",
    "activation",
    "hue_to_phase",
    "pattern_from_hues",
    "perturb_colors",
    "pattern_to_text",
    "patterns_from_text",
    "pattern_from_text",
    "digit_reference",
    "digit_input",
    "digit_corpus",
    "state_x_pattern",
    "state_w_pattern",
    "DIGIT_REFERENCE_BITS",
    "DIGIT_INPUT_BITS",
]


@dataclass(frozen=True, eq=False)
class Pattern:
    """Pixel grid, row-major, every value of unit modulus."""

    label: str
    width: int
    height: int
    values: tuple

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("pattern needs positive dimensions")
        if len(self.values) != self.width * self.height:
            raise ValueError("value count must equal width * height")
        for v in self.values:
            if abs(abs(complex(v)) - 1.0) > 1e-12:
                raise ValueError(f"pixel value {v!r} is not unit modulus")

    @property
    def n_pix(self) -> int:
        return self.width * self.height

    @property
    def is_bipolar(self) -> bool:
        return all(v == 1 or v == -1 for v in self.values)

    @staticmethod
    def from_bits(label: str, width: int, height: int, bits: str) -> "Pattern":
        """0 = white = +1, 1 = black = -1, row-major."""
        vals = tuple(1 if c == "0" else -1 for c in bits.strip())
        return Pattern(label, width, height, vals)


@dataclass(frozen=True, eq=False)
class PatternSet:
    patterns: tuple[Pattern, ...]

    def __post_init__(self) -> None:
        labels = [p.label for p in self.patterns]
        if len(set(labels)) != len(labels):
            raise ValueError("pattern labels must be distinct")
        dims = {(p.width, p.height) for p in self.patterns}
        if len(dims) > 1:
            raise ValueError("patterns in a set must share dimensions")

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.patterns)

    def by_label(self, label: str) -> Pattern:
        for p in self.patterns:
            if p.label == label:
                return p
        raise KeyError(label)


# =====================================================================
# Similarity
# =====================================================================


def _check_dims(w: Pattern, x: Pattern) -> None:
    if (w.width, w.height) != (x.width, x.height):
        raise ValueError("pattern dimensions differ")


def pixel_inner(w: Pattern, x: Pattern) -> complex:
    """(1/N_pix) sum conj(w_j) x_j."""
    _check_dims(w, x)
    total = sum(complex(a).conjugate() * complex(b) for a, b in zip(w.values, x.values))
    return total / w.n_pix


def pixel_inner_exact(w: Pattern, x: Pattern) -> Fraction:
    """Exact rational similarity for bipolar patterns."""
    _check_dims(w, x)
    if not (w.is_bipolar and x.is_bipolar):
        raise ValueError("exact similarity needs bipolar patterns")
    return Fraction(sum(a * b for a, b in zip(w.values, x.values)), w.n_pix)


def n_error(w: Pattern, x: Pattern) -> int:
    """Count of differing pixels: sum ((x_j - w_j)/2)^2."""
    _check_dims(w, x)
    if not (w.is_bipolar and x.is_bipolar):
        raise ValueError("error count needs bipolar patterns")
    return sum((b - a) ** 2 // 4 for a, b in zip(w.values, x.values))


def encode_pattern(p: Pattern) -> QubitRegister:
    """Equal-modulus register over N = ceil(log2 N_pix) qubits, value_j
    amplitudes padded with +1 beyond the pixel count, all scaled by
    1/sqrt(2^N)."""
    n = max(1, int(np.ceil(np.log2(p.n_pix))))
    dim = 2 ** n
    amps = np.ones(dim, dtype=complex)
    amps[: p.n_pix] = [complex(v) for v in p.values]
    return QubitRegister(n, amps / np.sqrt(dim))


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    ref_labels: tuple[str, ...]
    input_labels: tuple[str, ...]
    values: np.ndarray  # rows = refs, cols = inputs

    def entry(self, ref_label: str, input_label: str) -> complex:
        return complex(
            self.values[self.ref_labels.index(ref_label), self.input_labels.index(input_label)]
        )

    def csv_rows(self):
        yield ["ref\\input"] + list(self.input_labels)
        for i, rl in enumerate(self.ref_labels):
            row: list = [rl]
            for v in self.values[i]:
                row.append(v.real if abs(v.imag) < 1e-15 else complex(v))
            yield row


def similarity_matrix(refs: PatternSet, inputs: PatternSet) -> SimilarityMatrix:
    if len(refs) == 0:
        raise ValueError("empty reference set")
    vals = np.zeros((len(refs), len(inputs)), dtype=complex)
    for i, w in enumerate(refs):
        for j, x in enumerate(inputs):
            vals[i, j] = pixel_inner(w, x)
    return SimilarityMatrix(refs.labels, inputs.labels, vals)


def recognize(input_pattern: Pattern, refs: PatternSet) -> list[str]:
    """Labels of all references attaining the maximum real similarity;
    more than one label means a reported tie."""
    if len(refs) == 0:
        raise ValueError("empty reference set")
    scores = [(w.label, pixel_inner(w, input_pattern).real) for w in refs]
    best = max(s for _, s in scores)
    return [lab for lab, s in scores if s >= best - 1e-12]


def activation(kind: str, value, h: float = 0.0) -> float:
    """Neuron output for an inner-product value."""
    if kind == "step":
        return 1.0 if value >= h else -1.0
    if kind == "linear":
        return float(value)
    if kind == "sigmoid":
        return float(1.0 / (1.0 + np.exp(-(value - h))))
    if kind == "ramp":
        return float(max(0.0, value - h))
    if kind == "complex-modulus":
        return float(abs(value))
    raise ValueError(f"unknown activation kind {kind!r}")


# =====================================================================
# Colors
# =====================================================================


def hue_to_phase(hue: float) -> float:
    """theta = 2 pi hue: red (0) at 0, cyan (0.5) at pi."""
    return 2.0 * np.pi * float(hue)


def pattern_from_hues(label: str, width: int, height: int, hues) -> Pattern:
    vals = tuple(np.exp(1j * hue_to_phase(h)) for h in hues)
    return Pattern(label, width, height, vals)


def perturb_colors(p: Pattern, epsilon: float, seed: int) -> Pattern:
    """Rotate every pixel by an independent uniform angle in
    [-epsilon pi, +epsilon pi], deterministically from the seed."""
    if not (0.0 <= epsilon <= 1.0):
        raise ValueError("epsilon must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    deltas = rng.uniform(-epsilon * np.pi, epsilon * np.pi, p.n_pix)
    vals = tuple(complex(v) * np.exp(1j * d) for v, d in zip(p.values, deltas))
    return Pattern(p.label, p.width, p.height, vals)


# =====================================================================
# Text format
# =====================================================================


def pattern_to_text(p: Pattern) -> str:
    """Header `label WIDTHxHEIGHT mode`, then the pixel line: 0/1 for
    binary patterns, hue fractions in [0,1) otherwise."""
    if p.is_bipolar:
        body = " ".join("0" if v == 1 else "1" for v in p.values)
        mode = "binary"
    else:
        hues = [float(np.mod(np.angle(complex(v)), 2.0 * np.pi) / (2.0 * np.pi)) for v in p.values]
        body = " ".join(f"{h:.12g}" for h in hues)
        mode = "hue"
    return f"{p.label} {p.width}x{p.height} {mode}\n{body}\n"


def patterns_from_text(text: str) -> list[Pattern]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    out = []
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 3 or "x" not in head[1]:
            raise ValueError(f"bad pattern header {lines[i]!r}")
        label, dims, mode = head
        w, h = (int(v) for v in dims.split("x"))
        if i + 1 >= len(lines):
            raise ValueError(f"pattern {label!r} missing its value line")
        tokens = lines[i + 1].split()
        if len(tokens) != w * h:
            raise ValueError(f"pattern {label!r} needs {w * h} values, got {len(tokens)}")
        if mode == "binary":
            vals = tuple(1 if t == "0" else -1 if t == "1" else _bad(t) for t in tokens)
            out.append(Pattern(label, w, h, vals))
        elif mode == "hue":
            out.append(pattern_from_hues(label, w, h, [float(t) for t in tokens]))
        else:
            raise ValueError(f"unknown pattern mode {mode!r}")
        i += 2
    return out


def _bad(token: str):
    raise ValueError(f"binary pattern values must be 0 or 1, got {token!r}")


def pattern_from_text(text: str) -> Pattern:
    pats = patterns_from_text(text)
    if len(pats) != 1:
        raise ValueError(f"expected one pattern record, found {len(pats)}")
    return pats[0]


# =====================================================================
# Bundled corpora
# =====================================================================

# Digit glyphs on a 4-wide, 5-tall grid, row-major, 0 = white.
DIGIT_REFERENCE_BITS = {
    0: "11111001100110011111",
    1: "01101010001000101111",
    2: "11111001001001001111",
    3: "11111001001010011111",
    4: "10101010111100100010",
    5: "11111000111100011111",
    6: "11111000111110011111",
    7: "11110001001000100100",
    8: "11111001111110011111",
    9: "11111001111100011111",
}

DIGIT_INPUT_BITS = {
    0: "01101001100110010110",
    1: "01100010001000100010",
    2: "01110001001001000111",
    3: "01101001001010010110",
    4: "00101010111000100010",
    5: "01101000111000011110",
    6: "01101000111010011110",
    7: "01100001001000100010",
    8: "01101001011010010110",
    9: "01101001011100010110",
}


def digit_reference(digit: int) -> Pattern:
    return Pattern.from_bits(str(digit), 4, 5, DIGIT_REFERENCE_BITS[digit])


def digit_input(digit: int) -> Pattern:
    return Pattern.from_bits(str(digit), 4, 5, DIGIT_INPUT_BITS[digit])


def digit_corpus() -> tuple[PatternSet, PatternSet]:
    refs = PatternSet(tuple(digit_reference(d) for d in range(10)))
    inputs = PatternSet(tuple(digit_input(d) for d in range(10)))
    return refs, inputs


def state_x_pattern() -> Pattern:
    """16-pixel input example: black at indices 0 and 1."""
    return Pattern.from_bits("x", 4, 4, "1100000000000000")


def state_w_pattern() -> Pattern:
    """16-pixel weight example: black at indices 2, 3 and 4."""
    return Pattern.from_bits("w", 4, 4, "0011100000000000")

"""Successive cancellation decoding, the permuted-ensemble decoder, and
the Monte Carlo channel harness.

LLR sign convention: positive means bit 0 is more likely.  The check
node uses the min-sum rule (bit-exact and platform independent), the
variable node uses g(a, b, u) = b + (1 - 2u) a, and an LLR of exactly 0
decodes to bit 0, so every decoding path is deterministic.  Erasure
channels use +-1000.0 as the certainty sentinel and exactly 0.0 for an
erasure.

All decoders work on batches internally; the public single-frame entry
points wrap a batch of one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool
from collections.abc import Sequence

import numpy as np

from .affine import AffineMap, induced_permutation
from .monomial import CodeSpec

__all__ = [
    "CERTAIN_LLR",
    "BecChannel",
    "AwgnBpskChannel",
    "DecodeResult",
    "polar_transform",
    "polar_encode",
    "extract_info",
    "is_codeword",
    "sc_decode",
    "ae_decode",
    "correlation_score",
    "InvarianceReport",
    "sc_invariance_check",
    "SimulationResult",
    "simulate_bler",
    "wilson_interval",
]

CERTAIN_LLR = 1000.0


@dataclass(frozen=True)
class BecChannel:
    """Binary erasure channel; erased positions get LLR exactly 0."""

    erasure_prob: float

    def __post_init__(self):
        if not 0.0 <= self.erasure_prob < 1.0:
            raise ValueError(f"erasure probability {self.erasure_prob} not in [0, 1)")

    @property
    def param_value(self) -> float:
        return self.erasure_prob

    def llrs(self, x: np.ndarray, rng: np.random.Generator, rate: float) -> np.ndarray:
        out = (1.0 - 2.0 * x.astype(np.float64)) * CERTAIN_LLR
        out[rng.random(x.shape) < self.erasure_prob] = 0.0
        return out


@dataclass(frozen=True)
class AwgnBpskChannel:
    """BPSK over AWGN at a given Eb/N0; LLR = 2y / sigma^2."""

    ebn0_db: float

    @property
    def param_value(self) -> float:
        return self.ebn0_db

    def noise_sigma(self, rate: float) -> float:
        esn0 = rate * 10.0 ** (self.ebn0_db / 10.0)
        return math.sqrt(1.0 / (2.0 * esn0))

    def llrs(self, x: np.ndarray, rng: np.random.Generator, rate: float) -> np.ndarray:
        sigma = self.noise_sigma(rate)
        y = (1.0 - 2.0 * x.astype(np.float64)) + rng.normal(0.0, sigma, x.shape)
        return 2.0 * y / (sigma * sigma)


# ---------------------------------------------------------------------------
# encoding


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Multiply bit rows by H = F^(x)n along the last axis (self-inverse)."""
    c = np.array(u, dtype=np.uint8, copy=True)
    n_pos = c.shape[-1]
    if n_pos & (n_pos - 1):
        raise ValueError(f"length {n_pos} is not a power of two")
    d = 1
    while d < n_pos:
        view = c.reshape(c.shape[:-1] + (n_pos // (2 * d), 2, d))
        view[..., 0, :] ^= view[..., 1, :]
        d *= 2
    return c


def polar_encode(u: Sequence[int] | np.ndarray, spec: CodeSpec) -> np.ndarray:
    """Codeword of K info bits: scatter into the information rows, then
    apply the transform."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (spec.K,):
        raise ValueError(f"expected {spec.K} info bits, got shape {u.shape}")
    full = np.zeros(spec.N, dtype=np.uint8)
    full[list(spec.row_indices())] = u
    return polar_transform(full)


def _encode_batch(u: np.ndarray, spec: CodeSpec) -> np.ndarray:
    full = np.zeros((u.shape[0], spec.N), dtype=np.uint8)
    full[:, list(spec.row_indices())] = u
    return polar_transform(full)


def extract_info(codeword: np.ndarray, spec: CodeSpec) -> np.ndarray:
    """Info bits of a codeword (the transform is its own inverse)."""
    u = polar_transform(np.asarray(codeword, dtype=np.uint8))
    return u[..., list(spec.row_indices())]


def is_codeword(x: np.ndarray, spec: CodeSpec) -> bool:
    u = polar_transform(np.asarray(x, dtype=np.uint8))
    frozen = list(spec.frozen_indices())
    return not frozen or not u[..., frozen].any()


# ---------------------------------------------------------------------------
# successive cancellation


def _sc_batch(llrs: np.ndarray, info_mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode a (batch, size) LLR block; returns (codewords, u-vectors)."""
    size = llrs.shape[1]
    if size == 1:
        if info_mask[0]:
            u = (llrs < 0).astype(np.uint8)
        else:
            u = np.zeros(llrs.shape, dtype=np.uint8)
        return u, u
    h = size // 2
    a, b = llrs[:, :h], llrs[:, h:]
    l1 = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    x1, u1 = _sc_batch(l1, info_mask[:h])
    l2 = b + (1.0 - 2.0 * x1) * a
    x2, u2 = _sc_batch(l2, info_mask[h:])
    return np.hstack([x1 ^ x2, x2]), np.hstack([u1, u2])


def _info_mask(spec: CodeSpec) -> np.ndarray:
    mask = np.zeros(spec.N, dtype=np.uint8)
    mask[list(spec.row_indices())] = 1
    return mask


@dataclass(frozen=True)
class DecodeResult:
    info_bits: np.ndarray
    codeword: np.ndarray
    scores: tuple[float, ...]
    chosen: int


def correlation_score(codeword: np.ndarray, llr: np.ndarray) -> float:
    """sum (1 - 2 x_i) llr_i; the ML metric for BPSK and permutation
    consistent: score(pi(x), pi(llr)) == score(x, llr)."""
    return float(((1.0 - 2.0 * codeword) * llr).sum())


def sc_decode(llr: Sequence[float] | np.ndarray, spec: CodeSpec) -> DecodeResult:
    """Plain successive cancellation decoding of one frame."""
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} LLRs, got shape {llr.shape}")
    x, u = _sc_batch(llr[None, :], _info_mask(spec))
    info = u[0, list(spec.row_indices())]
    return DecodeResult(info, x[0], (correlation_score(x[0], llr),), 0)


def _ae_batch(
    llrs: np.ndarray, perms: np.ndarray, info_mask: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ensemble decoding of a batch: permute, decode, de-interleave,
    keep the best-correlating candidate per frame.

    Returns (codewords (B, N), chosen (B,), scores (B, L))."""
    batch, n_pos = llrs.shape
    n_perm = len(perms)
    permuted = llrs[:, perms].reshape(batch * n_perm, n_pos)
    x, _ = _sc_batch(permuted, info_mask)
    x = x.reshape(batch, n_perm, n_pos)
    cand = np.empty_like(x)
    for l, pi in enumerate(perms):
        cand[:, l, pi] = x[:, l, :]
    scores = ((1.0 - 2.0 * cand) * llrs[:, None, :]).sum(axis=2)
    chosen = scores.argmax(axis=1)  # ties resolve to the lowest index
    best = cand[np.arange(batch), chosen]
    return best, chosen, scores


def ae_decode(
    llr: Sequence[float] | np.ndarray,
    perms: Sequence[Sequence[int]],
    spec: CodeSpec,
) -> DecodeResult:
    """Ensemble SC decoding under a list of automorphism permutations.

    Each permutation is applied to the received LLRs, the permuted frame
    is SC decoded, the candidate is de-interleaved and scored by
    correlation with the original LLRs; the best candidate wins.  The
    permutations must be induced by automorphisms of the code (not
    re-verified here).
    """
    if len(perms) == 0:
        raise ValueError("empty permutation ensemble")
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} LLRs, got shape {llr.shape}")
    best, chosen, scores = _ae_batch(
        llr[None, :], np.array(list(perms), dtype=np.intp), _info_mask(spec)
    )
    info = extract_info(best[0], spec)
    return DecodeResult(info, best[0], tuple(float(s) for s in scores[0]), int(chosen[0]))


# ---------------------------------------------------------------------------
# SC invariance


@dataclass(frozen=True)
class InvarianceReport:
    trials: int
    equal: int

    @property
    def fraction(self) -> float:
        return self.equal / self.trials if self.trials else 1.0


def sc_invariance_check(
    t: AffineMap,
    spec: CodeSpec,
    trials: int = 100,
    seed: int = 0,
    channel: BecChannel | AwgnBpskChannel | None = None,
) -> InvarianceReport:
    """Fraction of noisy frames with SC(pi(L)) == pi(SC(L)) bit-exactly,
    for the permutation induced by t (hard-decision codeword equality)."""
    if channel is None:
        channel = AwgnBpskChannel(1.0)
    perm = np.array(induced_permutation(t), dtype=np.intp)
    rng = np.random.default_rng([seed, 0])
    u = rng.integers(0, 2, size=(trials, spec.K), dtype=np.uint8)
    llrs = channel.llrs(_encode_batch(u, spec), rng, spec.rate)
    mask = _info_mask(spec)
    decoded_then_permuted = _sc_batch(llrs, mask)[0][:, perm]
    permuted_then_decoded = _sc_batch(llrs[:, perm], mask)[0]
    equal = int((decoded_then_permuted == permuted_then_decoded).all(axis=1).sum())
    return InvarianceReport(trials, equal)


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class SimulationResult:
    frames: int
    errors: int
    channel_param: float
    decoder: str
    ensemble_size: int
    seed: int

    @property
    def bler(self) -> float:
        return self.errors / self.frames

    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.frames)


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """95% (by default) Wilson score interval for k successes in n trials."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


_SIM_BATCH = 1024  # fixed so results never depend on the worker count


def _sim_batch(args) -> int:
    spec, channel, perms, seed, batch_idx, count = args
    rng = np.random.default_rng([seed, batch_idx])
    u = rng.integers(0, 2, size=(count, spec.K), dtype=np.uint8)
    llrs = channel.llrs(_encode_batch(u, spec), rng, spec.rate)
    mask = _info_mask(spec)
    rows = list(spec.row_indices())
    if perms is None:
        _, u_full = _sc_batch(llrs, mask)
        u_hat = u_full[:, rows]
    else:
        best, _, _ = _ae_batch(llrs, perms, mask)
        u_hat = polar_transform(best)[:, rows]
    return int((u_hat != u).any(axis=1).sum())


def simulate_bler(
    spec: CodeSpec,
    channel: BecChannel | AwgnBpskChannel,
    num_frames: int,
    seed: int,
    decoder: str = "sc",
    perms: Sequence[Sequence[int]] | None = None,
    jobs: int = 1,
) -> SimulationResult:
    """Monte Carlo block error rate of SC or ensemble-SC decoding.

    Frames are processed in fixed-size batches whose randomness derives
    only from (seed, batch index), so the result is independent of the
    worker count.  A block error is any mismatch in the decoded info bits.
    """
    if num_frames < 1:
        raise ValueError("need at least one frame")
    if decoder == "sc":
        perm_arr = None
        ensemble = 1
    elif decoder == "ae":
        if not perms:
            raise ValueError("ensemble decoding needs a nonempty permutation list")
        perm_arr = np.array(list(perms), dtype=np.intp)
        ensemble = len(perm_arr)
    else:
        raise ValueError(f"unknown decoder {decoder!r}")

    batches = []
    start = 0
    idx = 0
    while start < num_frames:
        count = min(_SIM_BATCH, num_frames - start)
        batches.append((spec, channel, perm_arr, seed, idx, count))
        start += count
        idx += 1

    if jobs > 1 and len(batches) > 1:
        with Pool(jobs) as pool:
            errors = sum(pool.map(_sim_batch, batches))
    else:
        errors = sum(_sim_batch(b) for b in batches)
    return SimulationResult(
        frames=num_frames,
        errors=errors,
        channel_param=channel.param_value,
        decoder=decoder,
        ensemble_size=ensemble,
        seed=seed,
    )

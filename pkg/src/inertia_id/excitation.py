"""Commanded-torque excitation profiles.

Eight profile families of varying spectral richness, from a single pulse to
pseudo-random binary sequences. Every generated profile is normalized so the
peak |torque| per axis equals the requested maximum exactly.

Waveform timing constants are expressed as fractions of a 300 s reference
episode and scale with the requested duration, so a 300 s profile uses the
canonical onsets/periods (e.g. one-step pulses at 10/30/50 s) while shorter
or longer episodes keep the same shape.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ProfileKind", "ExcitationProfile", "generate", "spectral_summary",
           "SpectralSummary", "profile_to_csv"]

_REFERENCE_DURATION = 300.0


class ProfileKind(enum.Enum):
    ONE_STEP = "one-step"
    MULTI_STEP = "multi-step"
    SAWTOOTH = "sawtooth"
    SINE = "sine"
    MULTI_SINE = "multi-sine"
    CHIRP = "chirp"
    PRBS = "prbs"
    SINE_3AXIS = "sine-3axis"

    @classmethod
    def from_name(cls, name: str) -> "ProfileKind":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        for kind in cls:
            if kind.value == key or kind.value.replace("-", "") == key.replace("-", ""):
                return kind
        raise ValueError(f"unknown profile kind: {name!r}")


@dataclass(frozen=True)
class ExcitationProfile:
    """Per-axis commanded wheel-torque series at the control period."""

    kind: ProfileKind
    samples: np.ndarray        # (N, 3) torque [N m]
    duration: float            # s
    dt_ctrl: float             # s
    tau_max: float             # N m, peak per axis
    seed: int = 0              # consumed only by PRBS


def generate(kind: ProfileKind | str, duration: float, dt_ctrl: float,
             tau_max: float, seed: int = 0) -> ExcitationProfile:
    """Build one excitation profile, normalized per axis to peak tau_max."""
    if isinstance(kind, str):
        kind = ProfileKind.from_name(kind)
    if duration <= 0 or dt_ctrl <= 0 or tau_max <= 0:
        raise ValueError("duration, dt_ctrl and tau_max must be positive")
    n = int(round(duration / dt_ctrl))
    t = np.arange(n) * dt_ctrl
    scale = duration / _REFERENCE_DURATION
    builder = _BUILDERS[kind]
    raw = builder(t, duration, dt_ctrl, scale, seed)
    samples = np.empty((n, 3))
    for ax in range(3):
        peak = float(np.max(np.abs(raw[:, ax])))
        samples[:, ax] = raw[:, ax] * (tau_max / peak) if peak > 0 else 0.0
    return ExcitationProfile(kind=kind, samples=samples, duration=duration,
                             dt_ctrl=dt_ctrl, tau_max=tau_max, seed=seed)


def _one_step(t, duration, dt_ctrl, scale, seed):
    # one 5 s pulse per axis, onsets staggered at 10/30/50 s (reference episode)
    out = np.zeros((t.size, 3))
    width = 5.0 * scale
    for ax, onset in enumerate((10.0 * scale, 30.0 * scale, 50.0 * scale)):
        out[(t >= onset) & (t < onset + width), ax] = 1.0
    return out


def _multi_step(t, duration, dt_ctrl, scale, seed):
    # +-1 square wave, 40 s period, per-axis phase offsets 0/13/27 s
    period = 40.0 * scale
    out = np.empty((t.size, 3))
    for ax, offset in enumerate((0.0, 13.0 * scale, 27.0 * scale)):
        phase = np.mod(t + offset, period) / period
        out[:, ax] = np.where(phase < 0.5, 1.0, -1.0)
    return out


def _sawtooth(t, duration, dt_ctrl, scale, seed):
    # ramp -1 -> +1 each 30 s period with a snap back, offsets as multi-step
    period = 30.0 * scale
    out = np.empty((t.size, 3))
    for ax, offset in enumerate((0.0, 13.0 * scale, 27.0 * scale)):
        phase = np.mod(t + offset, period) / period
        out[:, ax] = 2.0 * phase - 1.0
    return out


def _sine(t, duration, dt_ctrl, scale, seed):
    f = 0.05 / scale
    phases = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
    return np.stack([np.sin(2.0 * math.pi * f * t + p) for p in phases], axis=1)


_MULTI_SINE_FREQS = (0.02, 0.05, 0.11, 0.23)


def _multi_sine(t, duration, dt_ctrl, scale, seed):
    # equal-amplitude harmonics; per-axis phase pattern keeps the three
    # axes from moving in lockstep
    out = np.zeros((t.size, 3))
    for ax in range(3):
        for j, f in enumerate(_MULTI_SINE_FREQS):
            phase = 2.0 * math.pi * ax / 3.0 + math.pi * j / 4.0
            out[:, ax] += np.sin(2.0 * math.pi * (f / scale) * t + phase)
    return out


def _chirp(t, duration, dt_ctrl, scale, seed):
    # linear sweep 0.01 -> 0.5 Hz (reference) across the whole episode
    f0, f1 = 0.01 / scale, 0.5 / scale
    inst_phase = 2.0 * math.pi * (f0 * t + 0.5 * (f1 - f0) * t * t / duration)
    phases = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
    return np.stack([np.sin(inst_phase + p) for p in phases], axis=1)


def _prbs(t, duration, dt_ctrl, scale, seed):
    # order-9 maximal-length shift register (taps 9,5), 1 s chips at reference
    chip_samples = max(1, int(round(1.0 * scale / dt_ctrl)))
    n_chips = t.size // chip_samples + 1
    out = np.empty((t.size, 3))
    axis_seeds = np.random.SeedSequence(seed).generate_state(3)
    for ax in range(3):
        state = int(axis_seeds[ax]) % 511 + 1   # nonzero 9-bit register
        chips = np.empty(n_chips)
        for c in range(n_chips):
            bit = ((state >> 8) ^ (state >> 4)) & 1
            chips[c] = 1.0 if (state >> 8) & 1 else -1.0
            state = ((state << 1) | bit) & 0x1FF
        out[:, ax] = np.repeat(chips, chip_samples)[: t.size]
    return out


def _sine_3axis(t, duration, dt_ctrl, scale, seed):
    freqs = (0.03 / scale, 0.05 / scale, 0.07 / scale)
    return np.stack([np.sin(2.0 * math.pi * f * t) for f in freqs], axis=1)


_BUILDERS = {
    ProfileKind.ONE_STEP: _one_step,
    ProfileKind.MULTI_STEP: _multi_step,
    ProfileKind.SAWTOOTH: _sawtooth,
    ProfileKind.SINE: _sine,
    ProfileKind.MULTI_SINE: _multi_sine,
    ProfileKind.CHIRP: _chirp,
    ProfileKind.PRBS: _prbs,
    ProfileKind.SINE_3AXIS: _sine_3axis,
}


@dataclass(frozen=True)
class SpectralSummary:
    """Per-axis dominant frequencies [Hz] and 90%-power bandwidth [Hz]."""

    dominant: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]
    bandwidth: tuple[float, float, float]


def spectral_summary(profile: ExcitationProfile) -> SpectralSummary:
    """DFT-based frequency-content descriptor of a profile.

    Dominant frequencies are spectral peaks holding at least half the power
    of the strongest bin; the bandwidth is the frequency span between the
    5% and 95% quantiles of cumulative spectral power (90% of the power).
    """
    samples = profile.samples
    if samples.size == 0:
        raise ValueError("empty profile")
    freqs = np.fft.rfftfreq(samples.shape[0], d=profile.dt_ctrl)
    dominant = []
    bandwidth = []
    for ax in range(3):
        power = np.abs(np.fft.rfft(samples[:, ax])) ** 2
        total = float(power.sum())
        if total <= 0.0:
            dominant.append(())
            bandwidth.append(0.0)
            continue
        peak = float(power.max())
        doms = []
        for i in range(power.size):
            left = power[i - 1] if i > 0 else -1.0
            right = power[i + 1] if i + 1 < power.size else -1.0
            if power[i] >= 0.5 * peak and power[i] >= left and power[i] >= right:
                doms.append(float(freqs[i]))
        cum = np.cumsum(power) / total
        lo = float(freqs[np.searchsorted(cum, 0.05)])
        hi = float(freqs[np.searchsorted(cum, 0.95)])
        dominant.append(tuple(doms))
        bandwidth.append(max(0.0, hi - lo))
    return SpectralSummary(dominant=tuple(dominant), bandwidth=tuple(bandwidth))


def profile_to_csv(profile: ExcitationProfile, path) -> None:
    """Write the profile as ``t,tau_x,tau_y,tau_z`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "tau_x", "tau_y", "tau_z"])
        for k in range(profile.samples.shape[0]):
            writer.writerow([f"{k * profile.dt_ctrl:.17g}"]
                            + [f"{v:.17g}" for v in profile.samples[k]])

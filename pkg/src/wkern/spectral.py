"""FFT utilities for periodic samples on equispaced nodes t_j = 2*pi*j/N."""

import numpy as np


def wavenumbers(n):
    return np.fft.fftfreq(n, 1.0 / n)


def differentiate(values, order=1, axis=-1):
    """Spectral derivative d^order/dt^order of periodic samples along ``axis``.

    The Nyquist mode is dropped for odd orders so real data stay real.
    """
    values = np.asarray(values)
    n = values.shape[axis]
    k = wavenumbers(n)
    if order % 2 == 1 and n % 2 == 0:
        k[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    mult = ((1j * k) ** order).reshape(shape)
    out = np.fft.ifft(np.fft.fft(values, axis=axis) * mult, axis=axis)
    if np.isrealobj(values):
        return out.real
    return out


def _symmetric_coefficients(values):
    # returns (k, c) with the Nyquist coefficient split evenly between +-N/2
    n = values.shape[-1]
    c = np.fft.fft(values, axis=-1) / n
    k = wavenumbers(n)
    if n % 2 == 0:
        nyq = c[..., n // 2] / 2.0
        c = np.concatenate([c, nyq[..., None]], axis=-1)
        c[..., n // 2] = nyq
        k = np.concatenate([k, [n / 2.0]])
        k[n // 2] = -n / 2.0
    return k, c


def interpolate(values, t, derivative=0):
    """Evaluate the trigonometric interpolant of ``values`` (or a derivative) at ``t``."""
    values = np.asarray(values)
    t = np.asarray(t, dtype=float)
    k, c = _symmetric_coefficients(values)
    phase = np.exp(1j * np.multiply.outer(t, k))
    if derivative:
        phase = phase * (1j * k) ** derivative
    out = phase @ c.T if c.ndim > 1 else phase @ c
    if np.isrealobj(values):
        return out.real
    return out


def resample(values, m):
    """Band-limited resampling of periodic samples from N to m >= N nodes."""
    values = np.asarray(values)
    n = values.shape[-1]
    if m == n:
        return values.copy()
    if m < n:
        raise ValueError("resample only refines")
    c = np.fft.fft(values, axis=-1)
    out = np.zeros(values.shape[:-1] + (m,), dtype=complex)
    half = n // 2
    if n % 2 == 0:
        out[..., :half] = c[..., :half]
        out[..., m - half + 1:] = c[..., half + 1:]
        out[..., half] = c[..., half] / 2.0
        out[..., m - half] = c[..., half] / 2.0
    else:
        out[..., :half + 1] = c[..., :half + 1]
        out[..., m - half:] = c[..., half + 1:]
    res = np.fft.ifft(out, axis=-1) * (m / n)
    if np.isrealobj(values):
        return res.real
    return res


def periodic_integral(values, axis=-1):
    """Trapezoid rule for one period: (2*pi/N) * sum."""
    values = np.asarray(values)
    return values.sum(axis=axis) * (2.0 * np.pi / values.shape[axis])

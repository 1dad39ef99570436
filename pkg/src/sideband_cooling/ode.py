"""Explicit time stepping for autonomous linear ODEs y' = f(y).

``y`` may be an array of any shape (state vectors, density matrices).
Three drivers are provided:

* :func:`rk4_fixed` -- classical fourth-order Runge-Kutta at constant step;
* :func:`rk4_adaptive` -- the same scheme with step-doubling error control;
* :func:`affine_exact` -- exact propagation of y' = A y + b via the matrix
  exponential of the augmented generator, for slow dynamics that would need
  ~1e10 explicit steps.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

Guard = Optional[Callable[[float, np.ndarray], None]]


def rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + (0.5 * h) * k1)
    k3 = f(y + (0.5 * h) * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _sample_grid(t_end, n_samples):
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    n_samples = max(int(n_samples), 2)
    return np.linspace(0.0, t_end, n_samples)


def rk4_fixed(f, y0, t_end, dt, n_samples=501, guard: Guard = None, step_guard: Guard = None):
    """Integrate with constant step ``dt`` (shrunk so samples fall on steps).

    Returns ``(times, ys)`` with ``ys[i]`` the state at ``times[i]``.  ``guard``
    is called at every sample, ``step_guard`` after every step.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    total = max(int(np.ceil(t_end / dt - 1e-9)), 1)
    n_samples = min(max(int(n_samples), 2), total + 1)
    per = int(np.ceil(total / (n_samples - 1)))
    total = per * (n_samples - 1)
    h = t_end / total
    times = np.arange(n_samples) * (per * h)
    times[-1] = t_end
    y = np.array(y0, dtype=np.result_type(y0, float), copy=True)
    ys = np.empty((n_samples,) + y.shape, dtype=y.dtype)
    ys[0] = y
    if guard is not None:
        guard(0.0, y)
    for i in range(1, n_samples):
        for j in range(per):
            y = rk4_step(f, y, h)
            if step_guard is not None:
                step_guard(((i - 1) * per + j + 1) * h, y)
        ys[i] = y
        if guard is not None:
            guard(times[i], y)
    return times, ys


def rk4_adaptive(f, y0, t_end, h0, rtol=1e-8, atol=1e-14, n_samples=501,
                 guard: Guard = None, max_steps=10_000_000):
    """Step-doubling RK4: compare one step of h with two of h/2.

    The local error estimate ``|y_half - y_full| / 15`` is held below
    ``atol + rtol * |y|`` componentwise; the accepted state gets the
    Richardson correction.
    """
    times = _sample_grid(t_end, n_samples)
    y = np.array(y0, dtype=np.result_type(y0, float), copy=True)
    ys = np.empty((len(times),) + y.shape, dtype=y.dtype)
    ys[0] = y
    if guard is not None:
        guard(0.0, y)
    t, h, steps = 0.0, float(h0), 0
    for i, target in enumerate(times[1:], start=1):
        while t < target * (1 - 1e-15):
            if steps >= max_steps:
                raise RuntimeError("adaptive integration exceeded max_steps")
            h_try = min(h, target - t)
            full = rk4_step(f, y, h_try)
            half = rk4_step(f, rk4_step(f, y, 0.5 * h_try), 0.5 * h_try)
            diff = np.abs(half - full) / 15.0
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(half))
            err = float(np.max(diff / scale))
            steps += 1
            if err <= 1.0:
                t += h_try
                y = half + (half - full) / 15.0
                if guard is not None:
                    guard(t, y)
                grow = 2.0 if err == 0 else min(2.0, 0.9 * err ** -0.2)
                if h_try == h:
                    h = h * grow
            else:
                h = h_try * max(0.2, 0.9 * err ** -0.2)
        t = target
        ys[i] = y
    return times, ys


def affine_propagator(A, b, h):
    """exp(h [[A, b], [0, 0]]): maps (y, 1) at t to (y, 1) at t + h."""
    n = A.shape[0]
    aug = np.zeros((n + 1, n + 1), dtype=np.result_type(A, b))
    aug[:n, :n] = A
    aug[:n, n] = b
    return expm(h * aug)


def affine_exact(A, b, y0, times):
    """Exact solution of y' = A y + b at the given increasing ``times``.

    Propagators are cached per distinct time increment, so a uniform grid
    costs a single matrix exponential.
    """
    times = np.asarray(times, dtype=float)
    n = A.shape[0]
    z = np.append(np.asarray(y0, dtype=np.result_type(A, b, y0)), 1.0)
    out = np.empty((len(times), n), dtype=z.dtype)
    cache: dict[float, np.ndarray] = {}
    t_prev = 0.0
    for i, t in enumerate(times):
        h = float(t - t_prev)
        if h < 0:
            raise ValueError("times must be increasing")
        if h > 0:
            key = float(f"{h:.12e}")
            P = cache.get(key)
            if P is None:
                P = cache[key] = affine_propagator(A, b, h)
            z = P @ z
        out[i] = z[:n]
        t_prev = t
    return out

"""Cyclic Jacobi eigensolver kernels.

The full-spectrum Hermitian eigensolve is the hot inner loop of every
measure in this package (concurrence, entropies, correlation-tensor
spectra, validation), so it ships in two interchangeable backends:

* ``numba``: sequential cyclic sweeps compiled with ``@njit`` (default
  when numba imports cleanly);
* ``numpy``: the same threshold rotations in tournament order, applying
  each round of disjoint pivot pairs through vectorized gather/scatter
  updates; no compilation step.

The orderings differ, so the backends agree to solver accuracy rather
than bitwise.  Selection is controlled by the ``QCORR_BACKEND``
environment variable (``numba``, ``numpy`` or ``auto``), read once at
import.  ``benchmarks/bench_jacobi.py`` compares the two.

Kernels operate in place on a Hermitian ``h`` (complex128, C order) and,
when ``with_vectors`` is true, accumulate rotations into ``v``
(initialized to the identity by the caller; otherwise any 2-D complex
array works as a dummy).  They return the number of sweeps used, or -1
if the off-diagonal maximum still exceeds ``tol`` after ``max_sweeps``
sweeps.
"""

from __future__ import annotations

import math
import os

import numpy as np

ENV_VAR = "QCORR_BACKEND"


def jacobi_cycle_loops(h, v, max_sweeps, tol, with_vectors):
    n = h.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                m = abs(h[p, q])
                if m > off:
                    off = m
        if off <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = h[p, q]
                absb = abs(b)
                if absb <= tol:
                    continue
                e = b / absb
                tau = (h[p, p].real - h[q, q].real) / (2.0 * absb)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = s * e.conjugate()
                for k in range(n):
                    hpk = h[p, k]
                    hqk = h[q, k]
                    h[p, k] = c * hpk + se * hqk
                    h[q, k] = c * hqk - sec * hpk
                for k in range(n):
                    hkp = h[k, p]
                    hkq = h[k, q]
                    h[k, p] = c * hkp + sec * hkq
                    h[k, q] = c * hkq - se * hkp
                # restore exact Hermitian structure at the pivot
                h[p, q] = 0.0 + 0.0j
                h[q, p] = 0.0 + 0.0j
                h[p, p] = complex(h[p, p].real, 0.0)
                h[q, q] = complex(h[q, q].real, 0.0)
                if with_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp + sec * vkq
                        v[k, q] = c * vkq - se * vkp
    return -1


def _round_robin_rounds(n):
    """Partition all index pairs of {0..n-1} into rounds of disjoint pairs."""
    m = n if n % 2 == 0 else n + 1
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


_ROUND_CACHE: dict = {}


def jacobi_cycle_numpy(h, v, max_sweeps, tol, with_vectors):
    # tournament ordering: the disjoint pairs of one round rotate together
    # through vectorized gather/scatter updates
    n = h.shape[0]
    rounds = _ROUND_CACHE.get(n)
    if rounds is None:
        rounds = _ROUND_CACHE[n] = _round_robin_rounds(n)
    for sweep in range(max_sweeps + 1):
        a = np.abs(h)
        np.fill_diagonal(a, 0.0)
        if a.max() <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for pairs in rounds:
            ps = []
            qs = []
            cs = []
            ses = []
            secs = []
            for p, q in pairs:
                b = h[p, q]
                absb = abs(b)
                if absb <= tol:
                    continue
                e = b / absb
                tau = (h[p, p].real - h[q, q].real) / (2.0 * absb)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ps.append(p)
                qs.append(q)
                cs.append(c)
                ses.append(s * e)
                secs.append(s * e.conjugate())
            if not ps:
                continue
            if len(ps) == 1:
                p, q = ps[0], qs[0]
                c, se, sec = cs[0], ses[0], secs[0]
                hp = h[p, :].copy()
                hq = h[q, :].copy()
                h[p, :] = c * hp + se * hq
                h[q, :] = c * hq - sec * hp
                hp = h[:, p].copy()
                hq = h[:, q].copy()
                h[:, p] = c * hp + sec * hq
                h[:, q] = c * hq - se * hp
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                if with_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp + sec * vq
                    v[:, q] = c * vq - se * vp
                continue
            pv = np.array(ps)
            qv = np.array(qs)
            c_col = np.array(cs)[:, None]
            se_col = np.array(ses)[:, None]
            sec_col = np.array(secs)[:, None]
            hp = h[pv, :].copy()
            hq = h[qv, :].copy()
            h[pv, :] = c_col * hp + se_col * hq
            h[qv, :] = c_col * hq - sec_col * hp
            hp = h[:, pv].copy()
            hq = h[:, qv].copy()
            h[:, pv] = c_col.T * hp + sec_col.T * hq
            h[:, qv] = c_col.T * hq - se_col.T * hp
            h[pv, qv] = 0.0
            h[qv, pv] = 0.0
            h[pv, pv] = h[pv, pv].real
            h[qv, qv] = h[qv, qv].real
            if with_vectors:
                vp = v[:, pv].copy()
                vq = v[:, qv].copy()
                v[:, pv] = c_col.T * vp + sec_col.T * vq
                v[:, qv] = c_col.T * vq - se_col.T * vp
    return -1


_numba_kernel = None


def _load_numba_kernel():
    global _numba_kernel
    if _numba_kernel is None:
        import numba

        _numba_kernel = numba.njit(cache=True)(jacobi_cycle_loops)
    return _numba_kernel


def get_kernel(name: str):
    """Return the kernel callable for ``name`` ('numba' or 'numpy')."""
    if name == "numpy":
        return jacobi_cycle_numpy
    if name == "numba":
        return _load_numba_kernel()
    raise ValueError(f"unknown backend {name!r}, expected 'numba' or 'numpy'")


def _select_backend() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("numba", "numpy"):
        return choice
    if choice in ("", "auto"):
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
        return "numba"
    raise ValueError(
        f"{ENV_VAR}={choice!r} not understood, expected 'numba', 'numpy' or 'auto'"
    )


_BACKEND = _select_backend()
jacobi_cycle = get_kernel(_BACKEND)


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _BACKEND

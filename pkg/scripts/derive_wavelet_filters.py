"""Derive orthonormal wavelet filter tables and emit them as Python literals.

One-off generator for src/denoisebench/wavelets/filters.py. Daubechies and
Symlet filters come from spectral factorization of the Daubechies half-band
polynomial; Coiflets from Gauss-Newton refinement of a Lagrange half-band
initial guess. All arithmetic in mpmath at 50 digits, exported at 17
significant digits.

Run: python3 scripts/derive_wavelet_filters.py
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 50

SQRT2 = mp.sqrt(2)


def daubechies_y_roots(n_moments):
    """Roots of P(y) = sum_k C(n-1+k, k) y^k, the residual half-band factor."""
    coeffs = [mp.binomial(n_moments - 1 + k, k) for k in range(n_moments)]
    # mp.polyroots wants highest degree first
    return mp.polyroots(coeffs[::-1], maxsteps=200, extraprec=200)


def z_pair_from_y(y):
    """Map a root in y = (2 - z - 1/z)/4 to the (z, 1/z) pair."""
    b = 2 - 4 * y
    disc = mp.sqrt(b * b - 4)
    z1 = (b + disc) / 2
    z2 = (b - disc) / 2
    return (z1, z2) if abs(z1) < abs(z2) else (z2, z1)


def filter_from_roots(z_roots, n_moments):
    """Low-pass filter with n_moments zeros at z=-1 and the given spectral
    roots, normalized to sum sqrt(2)."""
    poly = [mp.mpf(1)]
    for _ in range(n_moments):
        poly = polymul(poly, [mp.mpf(1), mp.mpf(1)])  # (z + 1)
    for z0 in z_roots:
        poly = polymul(poly, [mp.mpf(1), -z0])  # (z - z0)
    h = [p.real for p in poly]
    s = sum(h)
    return [x * SQRT2 / s for x in h]


def polymul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def check_orthonormal(h, tol=mp.mpf("1e-30")):
    L = len(h)
    worst = mp.mpf(0)
    for m in range(L // 2):
        acc = sum(h[k] * h[k + 2 * m] for k in range(L - 2 * m))
        target = 1 if m == 0 else 0
        worst = max(worst, abs(acc - target))
    return worst


def daubechies(n_moments):
    roots = daubechies_y_roots(n_moments)
    inside = [z_pair_from_y(y)[0] for y in roots]
    return filter_from_roots(inside, n_moments)


def phase_nonlinearity(h):
    """L2 deviation of unwrapped phase from its linear least-squares fit."""
    hf = np.array([float(x) for x in h])
    n_fft = 1024
    H = np.fft.rfft(hf, n_fft)
    # avoid band edge where |H| ~ 0
    keep = slice(0, n_fft // 4)
    phase = np.unwrap(np.angle(H[keep]))
    w = np.arange(len(phase))
    a, b = np.polyfit(w, phase, 1)
    return float(np.sum((phase - (a * w + b)) ** 2))


def symlet(n_moments):
    """Least-asymmetric selection: enumerate inside/outside choices per
    conjugate root group, keep the filter with the flattest phase."""
    roots = daubechies_y_roots(n_moments)
    groups = []
    used = [False] * len(roots)
    for i, y in enumerate(roots):
        if used[i]:
            continue
        used[i] = True
        if abs(mp.im(y)) < mp.mpf("1e-30"):
            groups.append([y])
        else:
            for j in range(i + 1, len(roots)):
                if not used[j] and abs(roots[j] - mp.conj(y)) < mp.mpf("1e-20"):
                    used[j] = True
                    groups.append([y, roots[j]])
                    break
            else:
                raise RuntimeError("unpaired complex root")

    best = None
    best_cost = None
    for mask in range(1 << len(groups)):
        z_sel = []
        for gi, grp in enumerate(groups):
            outside = bool(mask >> gi & 1)
            for y in grp:
                z_in, z_out = z_pair_from_y(y)
                z_sel.append(z_out if outside else z_in)
        h = filter_from_roots(z_sel, n_moments)
        cost = phase_nonlinearity(h)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = h
    return best


def lagrange_halfband(n):
    """Deslauriers-Dubuc interpolating filter of order 2n, support
    -(2n-1)..(2n-1): even taps delta, odd taps Lagrange weights at 0."""
    nodes = [mp.mpf(2 * j + 1) for j in range(-n, n)]
    f = {0: mp.mpf(1)}
    for j, xj in enumerate(nodes):
        w = mp.mpf(1)
        for m, xm in enumerate(nodes):
            if m != j:
                w *= (0 - xm) / (xj - xm)
        f[int(xj)] = w
    return f


def coiflet_residual(h, n):
    """Residual vector of the coiflet system for filter length 6n."""
    L = 6 * n
    res = [sum(h) - SQRT2]
    for m in range(1, 3 * n):
        res.append(sum(h[k] * h[k + 2 * m] for k in range(L - 2 * m)))
    # 2n vanishing wavelet moments
    for p in range(2 * n):
        res.append(sum((-1) ** k * mp.mpf(k) ** p * h[k] for k in range(L)) / mp.mpf(L) ** p)
    # 2n-1 vanishing scaling moments about the center index 2n
    for p in range(1, 2 * n):
        res.append(sum(mp.mpf(k - 2 * n) ** p * h[k] for k in range(L)) / mp.mpf(L) ** p)
    return res


def coiflet(n):
    L = 6 * n
    f = lagrange_halfband(n)
    h = [f.get(k - 2 * n, mp.mpf(0)) / SQRT2 for k in range(L)]
    # Gauss-Newton on the overdetermined residual
    for it in range(60):
        r = coiflet_residual(h, n)
        norm = max(abs(x) for x in r)
        if norm < mp.mpf("1e-40"):
            break
        J = mp.matrix(len(r), L)
        eps = mp.mpf("1e-25")
        for j in range(L):
            hp = list(h)
            hp[j] += eps
            rp = coiflet_residual(hp, n)
            for i in range(len(r)):
                J[i, j] = (rp[i] - r[i]) / eps
        rhs = mp.matrix(r)
        delta = mp.lu_solve(J.T * J, J.T * rhs)
        h = [h[j] - delta[j] for j in range(L)]
    else:
        raise RuntimeError(f"coif{n} did not converge, residual {norm}")
    return h


def emit(name, h):
    worst = check_orthonormal(h)
    ssum = abs(sum(h) - SQRT2)
    print(f"# {name}: len={len(h)} sum_err={mp.nstr(ssum, 3)} orth_err={mp.nstr(worst, 3)}")
    print(f'    "{name}": [')
    for x in h:
        print(f"        {mp.nstr(x, 17)},")
    print("    ],")


if __name__ == "__main__":
    # sanity anchor: db2 against the textbook table
    db2 = daubechies(2)
    ref = [0.4829629131445341, 0.8365163037378079, 0.2241438680420134, -0.1294095225512604]
    assert max(abs(float(a) - b) for a, b in zip(db2, ref)) < 1e-12 or \
        max(abs(float(a) - b) for a, b in zip(db2[::-1], ref)) < 1e-12, [float(x) for x in db2]

    emit("haar", [1 / SQRT2, 1 / SQRT2])
    for n in (5, 10, 15):
        emit(f"db{n}", daubechies(n))
    for n in (5, 10, 15):
        emit(f"sym{n}", symlet(n))
    for n in (3, 4):
        emit(f"coif{n}", coiflet(n))

#!/usr/bin/env python3
"""Regenerate specfun_reference.csv with mpmath (50 significant digits).

The CSV is committed; this script exists so the vectors can be audited or
extended. It is not run during the build or tests.
"""
import csv
import mpmath as mp

mp.mp.dps = 50

rows = []

def emit(func, nu, z, value):
    rows.append((func, repr(nu), repr(z), mp.nstr(value, 22), "mpmath-dps50"))

# gamma on representative points of [-30, 171], avoiding poles
gamma_args = [-29.5, -17.25, -6.7, -0.5, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 7.77,
              12.0, 25.5, 51.3, 80.0, 121.75, 150.2, 170.5]
for x in gamma_args:
    emit("gamma", 0.0, x, mp.gamma(x))

# scaled modified Bessel e^{-z} I_nu(z)
nus = [0.0, 0.2236, 0.5, 0.7, 1.0, 1.118, 1.5, 2.3, 5.0, 10.0, 17.3, 33.0, 60.0]
zs = [1e-8, 1e-4, 0.1, 0.5, 1.0, 3.0, 7.5, 15.0, 40.0, 120.0, 1e3, 3.3e4, 1e6, 1e8]
for nu in nus:
    for z in zs:
        emit("bessel_i_scaled", nu, z, mp.besseli(nu, z) * mp.exp(-z))

# Bessel J
zsj = [1e-8, 1e-4, 0.1, 1.0, 2.5, 7.1, 20.0, 55.0, 200.0, 1.7e3, 2.5e4, 1e5]
for nu in nus:
    for z in zsj:
        emit("bessel_j", nu, z, mp.besselj(nu, z))

# J derivative via mpmath diff
for nu in [0.0, 0.5, 1.118, 2.3, 10.0, 33.0]:
    for z in [1e-4, 0.7, 7.1, 55.0, 1.7e3]:
        emit("bessel_j_prime", nu, z, mp.diff(lambda t: mp.besselj(nu, t), z))

# Gegenbauer C_l^lam(x)
for (l, lam, x) in [(0, 0.5, 0.3), (1, 0.5, 0.3), (2, 1.5, -0.8), (5, 1.5, 0.2),
                    (12, 0.5, 0.95), (40, 1.0, -0.4), (150, 2.5, 0.1)]:
    rows.append(("gegenbauer", repr(float(l)) + "/" + repr(lam), repr(x),
                 mp.nstr(mp.gegenbauer(l, lam, x), 22), "mpmath-dps50"))

# sine integral
for x in [1e-6, 0.1, 0.5, 2.0, 8.0, 30.0, 500.0, 1e4]:
    emit("si", 0.0, x, mp.si(x))

# regularized upper incomplete gamma Q(a, x)
for (a, x) in [(0.125, 1e-6), (0.125, 0.4), (0.5, 2.0), (0.875, 9.0),
               (1.5, 0.3), (3.0, 25.0), (0.25, 80.0)]:
    rows.append(("gamma_q", repr(a), repr(x),
                 mp.nstr(mp.gammainc(a, x, mp.inf, regularized=True), 22), "mpmath-dps50"))

with open("specfun_reference.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["function", "nu", "z", "value", "source"])
    w.writerows(rows)
print("wrote", len(rows), "vectors")

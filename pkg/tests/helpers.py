"""Small constructors shared by the test modules."""
import numpy as np

from pccsolve.observables import from_eigenspaces


def unit(i, n):
    v = np.zeros(n, dtype=complex)
    v[i - 1] = 1
    return v


def dichotomous(plus, minus, n):
    return from_eigenspaces([(1, [unit(i, n) for i in plus]), (-1, [unit(i, n) for i in minus])])

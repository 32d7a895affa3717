"""
Functions on the upper half plane carrying a weight, with the raising,
lowering and Laplace operators

    δ_w f  = ∂f + w f/(z - z̄)
    δ⁻ f   = (z - z̄)² ∂̄f
    Δ_w f  = (z - z̄)² ∂∂̄f + w (z - z̄) ∂̄f

realised with mpmath.diff on the real and imaginary parts. Each level of
nesting costs about a third of the working precision.
"""
from typing import Callable

import mpmath

from scripts.cmgreen.tool import default_prec


class WeightedFn:
    def __init__(self, fn: Callable, weight: int, prec: int = default_prec, name: str = "f"):
        self.fn = fn
        self.weight = weight
        self.prec = prec
        self.name = name

    def __call__(self, z):
        with mpmath.workprec(self.prec):
            return self.fn(mpmath.mpc(z))

    def __repr__(self):
        return f"WeightedFn({self.name}, weight={self.weight})"

    def _partial(self, z, nx: int, ny: int):
        # fn computes at a fixed precision, so the step is 2^-P/3 rather than mpmath's default
        fn = self.fn
        with mpmath.workprec(self.prec):
            z = mpmath.mpc(z)
            h = mpmath.ldexp(1, -self.prec // 3)
            return mpmath.diff(lambda x, y: fn(mpmath.mpc(x, y)), (z.real, z.imag), (nx, ny), h=h)

    def d(self, z):
        """∂ = (∂x - i ∂y)/2"""
        return (self._partial(z, 1, 0) - 1j * self._partial(z, 0, 1)) / 2

    def dbar(self, z):
        return (self._partial(z, 1, 0) + 1j * self._partial(z, 0, 1)) / 2

    def d_dbar(self, z):
        return (self._partial(z, 2, 0) + self._partial(z, 0, 2)) / 4

    def delta(self) -> "WeightedFn":
        w = self.weight

        def fn(z):
            return self.d(z) + w * self.fn(z) / (z - z.conjugate())

        return WeightedFn(fn, w + 2, self.prec, f"δ{self.name}")

    def delta_minus(self) -> "WeightedFn":
        def fn(z):
            return (z - z.conjugate()) ** 2 * self.dbar(z)

        return WeightedFn(fn, self.weight - 2, self.prec, f"δ⁻{self.name}")

    def delta_inverse(self) -> "WeightedFn":
        """δ^-1 = -δ⁻/2, the normalisation used by the extended Green function at weight 0."""
        low = self.delta_minus()
        return WeightedFn(lambda z: -low.fn(z) / 2, low.weight, self.prec, f"δ^-1{self.name}")

    def laplace(self, z):
        with mpmath.workprec(self.prec):
            z = mpmath.mpc(z)
            y2 = z - z.conjugate()
            return y2 ** 2 * self.d_dbar(z) + self.weight * y2 * self.dbar(z)

    def commutator(self, z):
        """[δ⁻, δ] f, which is w f for a weight w function."""
        with mpmath.workprec(self.prec):
            return self.delta().delta_minus()(z) - self.delta_minus().delta()(z)

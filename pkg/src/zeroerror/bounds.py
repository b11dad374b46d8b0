"""Numeric bounds, receiver thresholds and separation certificates.

Every verdict here is decided with Python integers or :class:`Fraction`;
floats only appear for displaying logarithms and for values derived from ϑ.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import ArgumentError
from .graphs import Graph
from .params import clique_cover_numbers, independence_number
from .theta import lovasz_theta

# classical upper bound c(Γ_k) <= 0.846 k, quoted from prior work for k = 4p^s - 1
CLASSICAL_GAMMA_COEFF = Fraction(846, 1000)
GAMMA_COEFF_SOURCE = "c(Γ_k) <= 0.846k for k = 4p^s - 1, p an odd prime (quoted from prior work)"


@dataclass
class BoundReport:
    """A named set of inputs and values plus an optional verdict.

    Values flagged exact are ints or Fractions; logs in bits are floats.
    """
    name: str
    inputs: dict[str, Any]
    values: dict[str, Any]
    verdict: bool | None = None
    explanation: str = ""
    exact: bool = True
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"report": self.name, "inputs": _encode(self.inputs)}
        for key, value in self.values.items():
            out[key] = _encode(value)
        out["certified"] = self.verdict
        out["explanation"] = self.explanation
        out["exact"] = self.exact
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def table(self) -> str:
        lines = [f"report      {self.name}"]
        for key, value in self.inputs.items():
            lines.append(f"input       {key} = {_show(value)}")
        for key, value in self.values.items():
            lines.append(f"value       {key} = {_show(value)}")
        if self.verdict is not None:
            lines.append(f"certified   {'yes' if self.verdict else 'no'}")
        if self.explanation:
            lines.append(f"explanation {self.explanation}")
        for note in self.notes:
            lines.append(f"note        {note}")
        return "\n".join(lines)


def _encode(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return str(value)


def _show(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_show(v) for v in value) + "]"
    if isinstance(value, int) and not isinstance(value, bool) and value.bit_length() > 64:
        return f"2^{value.bit_length() - 1}" if value & (value - 1) == 0 else f"{value} (~2^{math.log2(value):.3f})"
    return str(value)


def _log2_exact(n: int) -> Fraction | None:
    """log2(n) as an exact integer when n is a power of two, otherwise None."""
    return Fraction(n.bit_length() - 1) if n > 0 and n & (n - 1) == 0 else None


def _log2(n: int) -> float:
    return math.log2(n)


def _check_int(name: str, value, minimum: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ArgumentError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ArgumentError(f"{name} must be at least {minimum}, got {value}")


def max_teleport_exponent(alpha_lb: int, xi_ub: int) -> int:
    """Largest t >= 0 with xi_ub^(2t) <= alpha_lb, by integer comparison only."""
    t, power, step = 0, 1, xi_ub * xi_ub
    while power * step <= alpha_lb:
        power *= step
        t += 1
    return t


def teleport_lower_bound(v_count: int, alpha_lb: int, xi_ub: int, ell: int) -> BoundReport:
    """Teleportation lower bound t·log2|V|/(t+l) on the compound entangled capacity."""
    _check_int("v_count", v_count, 1)
    _check_int("alpha_lb", alpha_lb, 1)
    _check_int("xi_ub", xi_ub, 2)
    _check_int("ell", ell, 1)
    t = max_teleport_exponent(alpha_lb, xi_ub)
    log_v = _log2_exact(v_count)
    values: dict[str, Any] = {"t": t}
    if log_v is not None:
        exact_bound = t * log_v / (t + ell)
        values["bound_exact"] = exact_bound
        values["bound_bits"] = float(exact_bound)
    else:
        values["bound_bits"] = t * _log2(v_count) / (t + ell)
    degenerate = t == 0
    values["degenerate"] = degenerate
    explanation = (f"xi^2 = {xi_ub ** 2} exceeds alpha lower bound; no teleportation rounds, bound 0"
                   if degenerate else
                   f"t = {t} is the largest integer with xi^(2t) <= alpha; bound = t*log2|V|/(t+l)")
    return BoundReport("teleport-bound", {"v_count": v_count, "alpha_lb": alpha_lb, "xi_ub": xi_ub, "ell": ell},
                       values, None, explanation, exact=log_v is not None)


def odd_prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, s) with n = p^s for an odd prime p, or None. Deterministic trial division."""
    if n < 3 or n % 2 == 0:
        return None
    p = next((d for d in range(3, math.isqrt(n) + 1, 2) if n % d == 0), n)
    s = 0
    while n % p == 0:
        n //= p
        s += 1
    return (p, s) if n == 1 else None


def _check_gamma_k(k: int) -> None:
    _check_int("k", k, 5)
    if k % 2 == 0:
        raise ArgumentError(f"k must be odd, got {k}")


def gamma_teleport_exponent(k: int) -> int:
    """t for Γ_k: largest t with (k+1)^(2t) <= 2^((k-3)/2)."""
    _check_gamma_k(k)
    return max_teleport_exponent(1 << ((k - 3) // 2), k + 1)


def classical_gamma_bound_valid(k: int) -> tuple[bool, tuple[int, int] | None]:
    if (k + 1) % 4:
        return False, None
    pp = odd_prime_power((k + 1) // 4)
    return pp is not None, pp


def compound_separation_threshold(k: int) -> int:
    """Largest integer l with l < t·(0.144k - 1)/(0.856k), clamped at 0.

    This is the receiver count below which the closed-form sufficient
    condition guarantees an entangled advantage on Γ_k.
    """
    _check_gamma_k(k)
    t = gamma_teleport_exponent(k)
    num = (144 * k - 1000) * t
    den = 856 * k
    if num <= 0:
        return 0
    return (num - 1) // den


def gamma_report(k: int, ell: int) -> BoundReport:
    """Compare the entangled lower bound on Γ_k with the classical 0.846k upper bound."""
    _check_gamma_k(k)
    _check_int("ell", ell, 1)
    t = gamma_teleport_exponent(k)
    valid, pp = classical_gamma_bound_valid(k)
    lower = Fraction(t * (k - 1), t + ell)
    upper = CLASSICAL_GAMMA_COEFF * k
    threshold = compound_separation_threshold(k)
    beats = lower > upper
    certified = valid and beats
    values: dict[str, Any] = {
        "t": t,
        "entangled_lower_bits": lower,
        "entangled_lower_bits_float": float(lower),
        "classical_upper_bits": upper,
        "classical_upper_bits_float": float(upper),
        "classical_bound_valid": valid,
        "prime_power": list(pp) if pp else None,
        "threshold": threshold,
        "closed_form_condition": ell <= threshold,
    }
    if not valid:
        explanation = f"k + 1 = {k + 1} is not 4 times an odd prime power; classical bound unavailable, no certificate"
    elif beats:
        explanation = f"{t}*{k - 1}/{t + ell} > 0.846*{k}: separation certified"
    else:
        explanation = f"{t}*{k - 1}/{t + ell} <= 0.846*{k}: no separation"
    return BoundReport("gamma-report", {"k": k, "ell": ell}, values, certified, explanation,
                       notes=[GAMMA_COEFF_SOURCE])


def monogamy_threshold(g: Graph) -> BoundReport:
    """ℓ* = θ'ₑ(G): from ℓ* receivers on, the compound value collapses to α(G)."""
    _, theta_prime, cover = clique_cover_numbers(g)
    alpha, _ = independence_number(g)
    values = {"ell_star": theta_prime, "alpha": alpha, "cover": [list(p) for p in cover.parts]}
    explanation = f"for every l >= {theta_prime}, the entangled compound value with l receivers equals alpha = {alpha}"
    return BoundReport("monogamy", {"vertices": g.n, "edges": g.num_edges}, values, None, explanation)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def multisender_separation_report(k: int, n: int) -> BoundReport:
    """Exact check of k^n·⌊(2^k/k)^n⌋ < 2^(kn) for the orthogonality graph Ω_k."""
    _check_int("k", k, 4)
    _check_int("n", n, 1)
    kn = k ** n
    rhs = 1 << (k * n)
    floor_pow = rhs // kn
    lhs = kn * floor_pow
    mult4 = k % 4 == 0
    strict = lhs < rhs
    certified = mult4 and strict
    values: dict[str, Any] = {
        "theta_omega": Fraction(1 << k, k),
        "chi_star_omega": k if mult4 else None,
        "alpha_star_upper": floor_pow,
        "lhs": lhs,
        "rhs": rhs,
        "multiple_of_four": mult4,
        "power_of_two": _is_power_of_two(k),
        "senders": kn,
    }
    if not mult4:
        explanation = f"k = {k} is not a multiple of 4; chi*(Omega_k) = k is not available"
    elif strict:
        explanation = f"{kn}*{floor_pow} = {lhs} < {rhs}: the multi-sender entangled value exceeds senders times alpha*"
    else:
        explanation = f"{kn}*{floor_pow} = {lhs} is not below {rhs}: (2^k/k)^n is an integer, no certificate"
    return BoundReport("multisender-report", {"k": k, "n": n}, values, certified, explanation,
                       notes=["alpha*_{l,1}(G) >= l * alpha*(G) for l senders",
                              "alpha*(Omega_k^n) <= floor(theta(Omega_k)^n) with theta(Omega_k) = 2^k/k"])


def capacity_sandwich(g: Graph, ell: int = 1, theta_tol: float = 1e-7) -> BoundReport:
    """Interval bounds for c, c*, α* and their multi-sender versions."""
    _check_int("ell", ell, 1)
    alpha, _ = independence_number(g)
    theta = lovasz_theta(g, tol=theta_tol).value
    theta = max(theta, float(alpha))  # ϑ >= α always; absorb solver rounding
    log_a, log_t, log_l = math.log2(alpha), math.log2(theta), math.log2(ell)
    star_hi = max(alpha, math.floor(theta + 1e-6))
    values: dict[str, Any] = {
        "alpha": alpha,
        "theta": theta,
        "c": [log_a, log_t],
        "c_star": [log_a, log_t],
        "alpha_star": [alpha, star_hi],
        "c_multi": [log_a + log_l, log_t + log_l],
        "c_star_multi": [log_a + log_l, log_t + log_l],
    }
    explanation = ("log2 alpha <= c <= c* <= log2 theta; alpha* in [alpha, floor(theta)]; "
                   "l senders shift both capacities by log2 l")
    return BoundReport("sandwich", {"vertices": g.n, "edges": g.num_edges, "ell": ell}, values, None,
                       explanation, exact=False)

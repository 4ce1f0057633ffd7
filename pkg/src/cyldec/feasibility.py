"""Exact strict-positivity testing for homogeneous rational linear systems.

Given equalities ``A·x = 0`` with rational coefficients, decide whether a
strictly positive rational solution exists.  The answer is always exact and
always carries evidence: a positive witness vector, or an infeasibility
certificate — a rational combination of the equalities equal to a nonzero,
nonnegative combination of the variables, which forces some variable set to
vanish and therefore rules out strict positivity (the two-sided alternative
for ``{A·x = 0, x > 0}``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

__all__ = [
    "FeasibilityWitness",
    "certificate_is_valid",
    "strict_positive_kernel",
]

LinearForm = Mapping[Hashable, Fraction]


@dataclass(frozen=True)
class FeasibilityWitness:
    """Outcome of a strict-positivity query.

    ``status`` is one of ``"feasible"``, ``"infeasible"``, ``"disconnected"``.
    Feasible outcomes carry ``lengths`` (a strictly positive rational value
    per variable).  Infeasible outcomes carry ``certificate``: coefficients
    ``combination`` over the equalities and the resulting nonnegative
    ``forced`` form they sum to.
    """

    status: str
    lengths: dict | None = None
    certificate: dict | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(row) for row in rows]
    pivots: list[int] = []
    lead = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot_row = next(
            (r for r in range(lead, len(rows)) if rows[r][col] != 0), None
        )
        if pivot_row is None:
            continue
        rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
        scale = rows[lead][col]
        rows[lead] = [value / scale for value in rows[lead]]
        for r in range(len(rows)):
            if r != lead and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return rows[:lead], pivots


def _kernel_basis(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    reduced, pivots = _rref(rows)
    free = [col for col in range(width) if col not in pivots]
    basis = []
    for free_col in free:
        vector = [Fraction(0)] * width
        vector[free_col] = Fraction(1)
        for row, pivot_col in zip(reduced, pivots):
            vector[pivot_col] = -row[free_col]
        basis.append(vector)
    return basis


def _solve_combination(
    rows: list[list[Fraction]], target: list[Fraction]
) -> list[Fraction]:
    """Solve ``sum_i y_i * rows[i] = target`` exactly (must be consistent)."""
    m = len(rows)
    width = len(target)
    augmented = [[rows[i][col] for i in range(m)] + [target[col]] for col in range(width)]
    reduced, pivots = _rref(augmented)
    y = [Fraction(0)] * m
    # Full reduction leaves each pivot row as y[pivot] = row[m] once the free
    # unknowns are pinned to zero.
    for row, pivot in zip(reduced, pivots):
        if pivot == m:
            raise ValueError("target is not a combination of the rows")
        y[pivot] = row[m]
    residual = [
        sum(rows[i][col] * y[i] for i in range(m)) - target[col]
        for col in range(width)
    ]
    if any(value != 0 for value in residual):
        raise ValueError("inconsistent combination solve")
    return y


def strict_positive_kernel(
    equalities: Sequence[LinearForm],
    variables: Sequence[Hashable] | None = None,
) -> FeasibilityWitness:
    """Decide ``{A·x = 0, x > 0}`` exactly over the rationals."""
    if variables is None:
        seen = set()
        for form in equalities:
            seen.update(form.keys())
        variables = sorted(seen)
    variables = list(variables)
    index = {var: i for i, var in enumerate(variables)}
    width = len(variables)
    if width == 0:
        return FeasibilityWitness("feasible", lengths={})
    matrix = [
        [Fraction(form.get(var, 0)) for var in variables] for form in equalities
    ]
    kernel = _kernel_basis(matrix, width)

    # Strict inequalities K_i · z > 0, one per variable, with provenance: each
    # derived inequality records its nonnegative combination of the originals.
    inequalities = [
        ([kernel_vector[i] for kernel_vector in kernel], _unit(width, i))
        for i in range(width)
    ]
    contradiction = None
    for position in range(len(kernel)):
        positives, negatives, zeros = [], [], []
        for coeffs, combo in inequalities:
            target = coeffs[position]
            if target > 0:
                positives.append((coeffs, combo))
            elif target < 0:
                negatives.append((coeffs, combo))
            else:
                zeros.append((coeffs, combo))
        merged = list(zeros)
        for pos_coeffs, pos_combo in positives:
            for neg_coeffs, neg_combo in negatives:
                a, b = -neg_coeffs[position], pos_coeffs[position]
                coeffs = [
                    a * pc + b * nc for pc, nc in zip(pos_coeffs, neg_coeffs)
                ]
                combo = [a * pc + b * nc for pc, nc in zip(pos_combo, neg_combo)]
                merged.append((coeffs, combo))
        inequalities = merged
        contradiction = next(
            (combo for coeffs, combo in inequalities if _is_zero(coeffs)), None
        )
        if contradiction is not None:
            break
    else:
        contradiction = next(
            (combo for coeffs, combo in inequalities if _is_zero(coeffs)), None
        )

    if contradiction is None and kernel:
        witness_z = _back_substitute(kernel, width)
        lengths = {}
        for i, var in enumerate(variables):
            value = sum(
                kernel_vector[i] * z for kernel_vector, z in zip(kernel, witness_z)
            )
            assert value > 0
            lengths[var] = Fraction(value)
        scale = 1
        for value in lengths.values():
            scale = scale * value.denominator // _gcd(scale, value.denominator)
        lengths = {var: value * scale for var, value in lengths.items()}
        return FeasibilityWitness("feasible", lengths=lengths)
    if contradiction is None:
        # Kernel is trivial: the only solution is x = 0.
        contradiction = _unit(width, 0)

    combination = _solve_combination(matrix, list(contradiction)) if equalities else []
    certificate = {
        "combination": {
            i: combination[i] for i in range(len(combination)) if combination[i] != 0
        },
        "forced": {
            variables[i]: contradiction[i]
            for i in range(width)
            if contradiction[i] != 0
        },
    }
    return FeasibilityWitness("infeasible", certificate=certificate)


def _unit(width: int, position: int) -> list[Fraction]:
    combo = [Fraction(0)] * width
    combo[position] = Fraction(1)
    return combo


def _is_zero(values: Sequence[Fraction]) -> bool:
    return all(value == 0 for value in values)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _back_substitute(kernel: list[list[Fraction]], width: int) -> list[Fraction]:
    """Pick z with K·z > 0 by re-running the elimination with bookkeeping."""
    dimensions = len(kernel)
    stage_rows: list[list[tuple[list[Fraction], Fraction]]] = []
    rows = [
        ([kernel_vector[i] for kernel_vector in kernel], Fraction(0))
        for i in range(width)
    ]
    for position in range(dimensions):
        stage_rows.append(rows)
        positives, negatives, zeros = [], [], []
        for coeffs, constant in rows:
            target = coeffs[position]
            if target > 0:
                positives.append((coeffs, constant))
            elif target < 0:
                negatives.append((coeffs, constant))
            else:
                zeros.append((coeffs, constant))
        merged = list(zeros)
        for pos_coeffs, pos_constant in positives:
            for neg_coeffs, neg_constant in negatives:
                a, b = -neg_coeffs[position], pos_coeffs[position]
                coeffs = [a * pc + b * nc for pc, nc in zip(pos_coeffs, neg_coeffs)]
                merged.append((coeffs, a * pos_constant + b * neg_constant))
        rows = merged
    values: list[Fraction] = [Fraction(0)] * dimensions
    for position in reversed(range(dimensions)):
        lower, upper = None, None
        for coeffs, constant in stage_rows[position]:
            tail = constant + sum(
                coeffs[j] * values[j] for j in range(position + 1, dimensions)
            )
            lead = coeffs[position]
            if lead > 0:
                bound = -tail / lead
                lower = bound if lower is None else max(lower, bound)
            elif lead < 0:
                bound = -tail / lead
                upper = bound if upper is None else min(upper, bound)
        if lower is None and upper is None:
            values[position] = Fraction(0)
        elif lower is None:
            values[position] = upper - 1
        elif upper is None:
            values[position] = lower + 1
        else:
            assert lower < upper
            values[position] = (lower + upper) / 2
    return values


def certificate_is_valid(
    equalities: Sequence[LinearForm], certificate: Mapping
) -> bool:
    """Re-derive the forced form by exact substitution and check its shape."""
    combination = certificate["combination"]
    forced = dict(certificate["forced"])
    accumulated: dict = {}
    for row_index, coefficient in combination.items():
        for var, value in equalities[row_index].items():
            accumulated[var] = accumulated.get(var, Fraction(0)) + coefficient * Fraction(value)
    accumulated = {var: value for var, value in accumulated.items() if value != 0}
    if accumulated != {var: value for var, value in forced.items() if value != 0}:
        return False
    if not forced:
        return False
    return all(value >= 0 for value in forced.values()) and any(
        value > 0 for value in forced.values()
    )

"""Acceptance battery: one test per criterion, at the stated tolerances.

Each test prints its criterion line (visible with ``pytest -s`` or on
failure) and asserts the criterion's pass flag.  The same checks back the
``exchange-ft verify`` subcommand.

Criterion 5 is expected to fail, by the mathematics of the construction
itself: the two square-root-swap factors send every action-table state to
its exact target ray, but the swapped branches carry an intrinsic relative
phase of -i against the unswapped ones, so no single global phase fits all
four rows.  The assertion is kept as stated rather than weakened; the
finding, with the measured branch phases, is in the failure message and in
the README.
"""

import pytest

from exchange_ft import verification as v


def _run(check, *args, **kwargs):
    result = check(*args, **kwargs)
    print()
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_conjugation_identity():
    _run(v.check_01_conjugation_identity)


def test_criterion_02_encoded_hadamard():
    _run(v.check_02_encoded_hadamard)


def test_criterion_03_encoded_cp_cnot():
    _run(v.check_03_encoded_cp_cnot)


def test_criterion_04_recoupling_and_single_z():
    _run(v.check_04_recoupling_and_single_z)


def test_criterion_05_lcu_action_table():
    _run(v.check_05_lcu_action_table)


def test_criterion_06_error_classification():
    _run(v.check_06_error_classification)


def test_criterion_07_hybrid_phase_flip_cycle():
    _run(v.check_07_hybrid_phase_flip_cycle)


def test_criterion_08_leakage_cycle():
    _run(v.check_08_leakage_cycle)


def test_criterion_09_boosting():
    _run(v.check_09_boosting)


def test_criterion_10_propagation_sweep():
    _run(v.check_10_propagation_sweep)


def test_criterion_11_determinism():
    _run(v.check_11_determinism)

#!/usr/bin/env python3
"""
Quick smoke test that the spatialvar library is installed and working.

Runs under pytest, or directly as a script for a readable summary.
"""

import sys


def test_imports():
    """Test that all modules can be imported."""
    import spatialvar
    from spatialvar import cli, combinatorics, convergence, estimators, fields, moments
    from spatialvar.montecarlo import ensemble, enumeration, streams, sweep
    from spatialvar.utils import grids, ingest, summation, synthetic, tables

    assert spatialvar.__version__
    assert callable(cli.main)


def test_snapshot_workflow():
    """Exact oracle and ensemble agree on a small snapshot."""
    import numpy as np
    from spatialvar import (
        EpochField,
        ReportingModel,
        WeightVector,
        exact_enumeration_epoch,
        simulate_epoch_ensemble,
        variance_single_epoch,
    )

    ef = EpochField(np.array([2.0, 5.0, 1.0, 4.0, 3.0, 6.0, 2.5, 3.5]))
    w = WeightVector.uniform(ef.n)
    rm = ReportingModel(0.8)
    _, exact = exact_enumeration_epoch(ef, w, rm)
    simulated = simulate_epoch_ensemble(ef, w, rm, 200_000, seed=1).ensemble_variance
    formula = variance_single_epoch(rm, ef).value
    assert abs(simulated - exact) / exact < 0.02
    assert formula > 0.0


def test_cli_entry():
    """The console entry point answers."""
    from spatialvar.cli import main

    assert main(["stirling", "--l", "3", "--m", "2", "--quiet"]) == 0


def main():
    """Run all tests."""
    print("=" * 60)
    print("spatialvar Library Test")
    print("=" * 60)

    results = []
    for name, test in (("Imports", test_imports),
                       ("Snapshot workflow", test_snapshot_workflow),
                       ("CLI entry", test_cli_entry)):
        try:
            test()
            results.append((name, True))
        except Exception as e:
            print(f"✗ {name} failed: {e}")
            results.append((name, False))

    print("\n" + "=" * 60)
    print("Test Summary")
    print("=" * 60)

    passed = sum(1 for _, result in results if result)
    for name, result in results:
        symbol = "✓" if result else "✗"
        print(f"{symbol} {name}: {'PASS' if result else 'FAIL'}")

    print("-" * 60)
    print(f"Total: {passed}/{len(results)} tests passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())

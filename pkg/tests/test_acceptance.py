"""Acceptance gate: one test per shipped guarantee, each printing a verdict.

Two expectations bundled with the source material do not survive the exact
computation (the global width value of the built-in scan, and the per-degree
unwinding identity for bands); they are asserted as stated and fail, with the
analysis recorded in the project notes.  Everything else is green.
"""
import io
import json
import time
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

from gentle import (band_complex, beta_cohomology, beta_window, check_minimal,
                    classify_walk, cohomology_dims, differential_matrix,
                    enumerate_gba, enumerate_gst, hl_spectrum,
                    longest_walk_arrows, node_sums, string_complex,
                    verify_counterexample_a0)
from gentle.cli import main
from gentle.complexes import mu_minimal_rotation, total_dimension
from gentle.exact import rank

from corpus import full_corpus

ROOT = Path(__file__).resolve().parent.parent
A0_FILE = str(ROOT / "algebras" / "a0.alg")

CORPUS = full_corpus()


def verdict(name, ok, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{' - ' + detail if detail else ''}")
    return ok


def test_criterion_1_base_computation():
    start = time.time()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["cohomology", A0_FILE, "--walk", "a1"])
    elapsed = time.time() - start
    payload = json.loads(buf.getvalue())
    ok = (code == 0
          and payload == {"dims": {"-1": 4, "0": 1}, "hl": 4, "hw": 2, "hr": 8}
          and elapsed < 1.0)
    assert verdict("1 base computation", ok, f"{elapsed:.2f}s")


def test_criterion_2_counterexample_scan():
    start = time.time()
    report = verify_counterexample_a0()
    elapsed = time.time() - start
    checks = report["checks"]
    ok = (checks["enumeration_complete"]
          and checks["hr_8_achieved"]
          and checks["hr_7_absent"]
          and checks["gl_hl_at_most_6"]
          and checks["derived_discrete"]
          and elapsed < 30.0)
    assert verdict("2 counterexample scan", ok,
                   f"hr achieved {report['hr_achieved']}, {elapsed:.2f}s")


def test_criterion_2_global_width_value():
    report = verify_counterexample_a0()
    ok = report["gl_hw"] == 3
    assert verdict("2 global width equals 3", ok,
                   f"computed {report['gl_hw']}")


def _spectrum_bound(pres):
    longest = longest_walk_arrows(pres)
    if longest is not None and longest <= 12:
        return [longest]
    return [7, 8, 9, 10, 11]


def test_criterion_3_no_gaps_with_reductions():
    start = time.time()
    assert len(CORPUS) >= 20
    problems = []
    reductions = 0
    for pres in CORPUS:
        outcome = None
        for bound in _spectrum_bound(pres):
            report = hl_spectrum(pres, bound, include_bands=True, reduce_check=True)
            if not report.gaps and not report.failures:
                outcome = report
                break
        if outcome is None:
            problems.append(pres.name)
        else:
            for trace in outcome.reductions:
                assert trace.output.hl == trace.input.hl - 1
            reductions += len(outcome.reductions)
    elapsed = time.time() - start
    ok = not problems and elapsed < 300.0
    assert verdict("3 gap-free spectra with exact reductions", ok,
                   f"{len(CORPUS)} algebras, {reductions} reductions, {elapsed:.1f}s"
                   + (f", problems {problems}" if problems else ""))


def test_criterion_4_oracle_equivalence():
    walks = 0
    mismatches = []
    for pres in CORPUS:
        for walk in enumerate_gst(pres, 6).walks[:120]:
            expected = cohomology_dims(pres, string_complex(pres, walk))
            if node_sums(pres, walk) != expected:
                mismatches.append((pres.name, walk.literal()))
            walks += 1
    ok = walks >= 500 and not mismatches
    assert verdict("4 closed form equals rank oracle", ok,
                   f"{walks} walks, {len(mismatches)} mismatches")


LAMBDAS = (Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2))


def _corpus_bands():
    for pres in CORPUS:
        for band in enumerate_gba(pres, 6).walks[:6]:
            yield pres, band


def test_criterion_5_band_identities():
    bands = 0
    problems = []
    for pres, band in _corpus_bands():
        bands += 1
        per_d = {}
        for d in (1, 2, 3):
            vectors = {lam: cohomology_dims(pres, band_complex(pres, band, lam, d))
                       for lam in LAMBDAS}
            values = {v.dims for v in vectors.values()}
            if len(values) != 1:
                problems.append((pres.name, band.literal(), d, "lambda"))
            per_d[d] = vectors[Fraction(1)]
            if per_d[d].as_dict().get(0, 0) != 0:
                problems.append((pres.name, band.literal(), d, "degree zero"))
        base = per_d[1].as_dict()
        for d in (2, 3):
            if per_d[d].as_dict() != {deg: d * v for deg, v in base.items()}:
                problems.append((pres.name, band.literal(), d, "d-linearity"))
    ok = bands > 0 and not problems
    assert verdict("5 band lambda independence and d-linearity", ok,
                   f"{bands} bands" + (f", problems {problems[:3]}" if problems else ""))


def test_criterion_5_band_unwinding_bridge():
    mismatches = []
    bands = 0
    for pres, band in _corpus_bands():
        rotated = mu_minimal_rotation(pres, band)
        for d in (1, 2, 3):
            bands += 1
            band_vec = cohomology_dims(pres, band_complex(pres, band, 1, d))
            unwound = classify_walk(pres, rotated.letters * d)
            beta_vec = beta_cohomology(pres, unwound)
            if band_vec.dims != beta_vec.dims:
                mismatches.append((pres.name, band.literal(), d,
                                   dict(band_vec.dims), dict(beta_vec.dims)))
    ok = bands > 0 and not mismatches
    assert verdict("5 band unwinding bridge identity", ok,
                   f"{bands} cases, {len(mismatches)} mismatches"
                   + (f", e.g. {mismatches[0]}" if mismatches else ""))


def test_criterion_6_structural_invariants():
    built = 0
    problems = []
    for pres in CORPUS:
        for walk in enumerate_gst(pres, 7).walks[:200]:
            cx = string_complex(pres, walk)  # asserts d.d = 0 on build
            built += 1
            if not check_minimal(cx):
                problems.append((pres.name, walk.literal(), "minimality"))
            if cx.summand_count() != walk.width + 1:
                problems.append((pres.name, walk.literal(), "summand count"))
            vec = cohomology_dims(pres, cx).as_dict()
            chi_x = sum((-1) ** d * total_dimension(pres, cx, d) for d in cx.degrees())
            chi_h = sum((-1) ** d * v for d, v in vec.items())
            if chi_x != chi_h:
                problems.append((pres.name, walk.literal(), "euler"))
        for band in enumerate_gba(pres, 8).walks[:8]:
            for d in (1, 2, 3):
                cx = band_complex(pres, band, 1, d)
                built += 1
                if not check_minimal(cx):
                    problems.append((pres.name, band.literal(), "minimality"))
                if cx.summand_count() != band.width * d:
                    problems.append((pres.name, band.literal(), "summand count"))
    # independent numeric route for d.d = 0 on a sample
    for pres in CORPUS[:6]:
        for walk in enumerate_gst(pres, 5).walks[:10]:
            cx = string_complex(pres, walk)
            for deg in cx.degrees():
                first = differential_matrix(pres, cx, deg)
                second = differential_matrix(pres, cx, deg + 1)
                if not first or not second:
                    continue
                for col in range(len(first[0])):
                    vec = [row[col] for row in first]
                    image = [sum(second[r][k] * vec[k] for k in range(len(vec)))
                             for r in range(len(second))]
                    if any(image):
                        problems.append((pres.name, walk.literal(), "d squared"))
    ok = built >= 1000 and not problems
    assert verdict("6 structural invariants", ok,
                   f"{built} complexes" + (f", problems {problems[:3]}" if problems else ""))


def test_criterion_7_beta_rule_against_windows():
    checked = 0
    mismatches = []
    for pres in CORPUS:
        for walk in enumerate_gst(pres, 5).walks[:60]:
            cx = string_complex(pres, walk)
            bottom = min(cx.degrees())
            if cohomology_dims(pres, cx).as_dict().get(bottom, 0) == 0:
                continue
            expected = beta_cohomology(pres, walk).as_dict()
            for steps in (1, 2, 3):
                window, _ = beta_window(pres, walk, steps)
                seen = {d: v for d, v in cohomology_dims(pres, window).as_dict().items()
                        if d >= bottom}
                if seen != expected:
                    mismatches.append((pres.name, walk.literal(), steps))
            checked += 1
    ok = checked > 0 and not mismatches
    assert verdict("7 beta rule matches resolution windows", ok,
                   f"{checked} strings, {len(mismatches)} mismatches")

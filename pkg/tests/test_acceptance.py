"""Acceptance suite: one printed PASS/FAIL line per criterion, then a hard assertion.

Run with ``pytest tests/test_acceptance.py -v`` to see the lines even when
output capture is on.
"""

import random
import time
from pathlib import Path

import pytest

from syzforge.complexes import ext_is_zero, ext_module, free_resolution, grade_or_inf, module_grade, proj_dim
from syzforge.corpus import generate_corpus, random_presentation
from syzforge.embeddings import drop_last_relation, embed_module, shamash_resolution, syzygy_split_check
from syzforge.groebner import syzygy_matrix
from syzforge.modules import Ideal, Presentation, annihilator
from syzforge.order_ideals import PASS, check_oic, tor_vanishing_sequence
from syzforge.report import run_text
from syzforge.ring import QQ, PolyRing

import oracles

R = PolyRing(("x", "y", "z"), QQ)
TIME_LIMIT = 60.0
SESSION = Path(__file__).resolve().parent.parent / "sessions" / "acceptance.txt"

# the fixed corpus: seed and round-robin twist profiles
CORPUS_SEED = 7
CORPUS_PROFILES = [((0, 0), (1, 1, 2)), ((0,), (2, 2)), ((0, 0, 1), (1, 2, 2, 2)), ((0,), (1, 2, 3))]
KOSZUL_FAMILY = ["x", "x,y", "x,y,z", "x^2,y^2", "x^2,y^2,z^2", "x*y,z"]


def cyclic(text):
    return Presentation.cyclic(R, [R.parse(g) for g in text.split(",")])


def report(capsys, n, problems, detail, started):
    elapsed = time.perf_counter() - started
    if elapsed > TIME_LIMIT:
        problems.append(f"took {elapsed:.1f}s (limit {TIME_LIMIT:.0f}s)")
    status = "FAIL" if problems else "PASS"
    with capsys.disabled():
        print(f"\nACCEPTANCE {n} {status}: {detail} [{elapsed:.2f}s]" + ("" if not problems else " -- " + "; ".join(problems)))
    assert not problems, problems


def test_criterion_1_koszul_ground_truth(capsys):
    t0 = time.perf_counter()
    problems = []
    K = cyclic("x,y,z")
    m = Ideal(R, list(R.gens()))
    res = free_resolution(K)
    if res.betti().totals() != [1, 3, 3, 1]:
        problems.append(f"betti {res.betti().totals()}")
    if not (grade_or_inf(m) == 3 == proj_dim(K)):
        problems.append(f"grade {grade_or_inf(m)} pd {proj_dim(K)}")
    for i in range(3):
        if not ext_is_zero(K, i, resolution=res):
            problems.append(f"Ext^{i} nonzero")
    E = ext_module(K, 3, resolution=res)
    rel = Ideal(R, [R.parse(f) for f in E.relations.to_strings()[0]]) if E.ngens == 1 else None
    if rel is None or not (rel.contains_ideal(m) and m.contains_ideal(rel)):
        problems.append("Ext^3 is not cyclic with annihilator m")
    # the dense oracle agrees with the grade
    if oracles.grade_by_dimension(3, list(R.gens()), 6) != 3:
        problems.append("oracle grade of m")
    report(capsys, 1, problems, "Betti (1,3,3,1), grade = pd = 3, Ext^i(R/m,R) = 0 below 3 and k at 3", t0)


def test_criterion_2_order_ideal_gate(capsys):
    t0 = time.perf_counter()
    problems = []
    modules = generate_corpus(R, CORPUS_SEED, 25, CORPUS_PROFILES)
    if len(modules) != 25:
        problems.append(f"corpus has {len(modules)} modules")
    modules += [cyclic(g) for g in KOSZUL_FAMILY]
    passed = 0
    for P in modules:
        rep = check_oic(P, module_id=P.name)
        if rep.verdict == PASS and not rep.partial and not rep.consistency_failures():
            passed += 1
        else:
            problems.append(f"{P.name or 'koszul'}: {rep.verdict}")
    report(capsys, 2, problems, f"check_oic {passed}/{len(modules)} PASS (25 corpus + {len(KOSZUL_FAMILY)} Koszul)",
           t0)


@pytest.mark.parametrize("gens, seq", [("x,y", ("x",)), ("x,y,z", ("x", "y"))])
def test_criterion_3_embedding_pipeline(capsys, gens, seq):
    t0 = time.perf_counter()
    problems = []
    M = cyclic(gens)
    res = embed_module(M, [R.parse(s) for s in seq])
    t = len(seq)
    cert = res.sequence_certificate
    if not cert["exact"]:
        problems.append("0 -> M -> Q -> T -> 0 not exact")
    if res.pd_Q_over_quotient != res.pd_M - t:
        problems.append(f"pd Q = {res.pd_Q_over_quotient}, pd M - t = {res.pd_M - t}")
    if res.pd_T_over_base != t:
        problems.append(f"pd T = {res.pd_T_over_base}")
    if res.grade_T != res.pd_T_over_base:
        problems.append(f"grade T = {res.grade_T}")
    # Hilbert functions recomputed densely, independent of the certificate
    D = cert["degree_bound"]
    h = {}
    for name, P in (("M", res.M), ("Q", res.Q), ("T", res.T)):
        h[name] = oracles.hilbert_function(3, P.relations.columns, P.relations.source.twists,
                                           P.generators.twists, D, P.ctx.ideal_gens)
    if [a + b for a, b in zip(h["M"], h["T"])] != h["Q"]:
        problems.append("Hilbert(M) + Hilbert(T) != Hilbert(Q)")
    if oracles.grade_by_dimension(3, annihilator(res.T).generators, D) != t:
        problems.append("oracle grade of T")
    report(capsys, 3, problems, f"M=R/({gens}), x=({','.join(seq)}): exact, pd Q={res.pd_Q_over_quotient}, "
           f"pd T={res.pd_T_over_base}, grade T={res.grade_T}, Hilbert additive to D={D}", t0)


def test_criterion_4_split_and_mutation(capsys):
    t0 = time.perf_counter()
    problems = []
    M = cyclic("x,y")
    res = embed_module(M, [R.parse("x")])
    good = syzygy_split_check(M, res)
    bad = syzygy_split_check(M, res, Q_override=drop_last_relation(res.Q))
    if good.verdict != "PASS":
        problems.append(f"split check {good.verdict}")
    if bad.verdict != "FAIL":
        problems.append(f"mutation control {bad.verdict}")
    report(capsys, 4, problems, f"split check {good.verdict}, mutated control {bad.verdict}", t0)


def test_criterion_5_shamash(capsys):
    t0 = time.perf_counter()
    problems = []
    data = shamash_resolution(free_resolution(cyclic("x,y,z")), "x", D=6)
    if data.betti.totals() != [1, 2, 1]:
        problems.append(f"betti {data.betti.totals()}")
    for key in ("homotopy_identity", "square_zero", "exact_to_D", "sequences_exact"):
        if data.checks.get(key) is not True:
            problems.append(f"{key} = {data.checks.get(key)}")
    kinds = {s["sequence"] for s in data.sequences if s["exact"]}
    if kinds != {"syzygy_extension", "free_presentation"} or not all(s["exact"] for s in data.sequences):
        problems.append("short exact sequences not all exact")
    report(capsys, 5, problems, f"Betti over R/(x) {data.betti.totals()}, homotopy identity and sequences exact", t0)


def test_criterion_6_tor_vanishing_sequence(capsys):
    t0 = time.perf_counter()
    problems = []
    cert = tor_vanishing_sequence(cyclic("x,y"))
    if cert.verdict != PASS or len(cert.elements) != 2:
        problems.append(f"verdict {cert.verdict}, length {len(cert.elements)}")
    if not cert.verify():
        problems.append("certificate does not re-verify")
    zs = {t["j"]: t["verdict"] for t in cert.tor_vanishing if t["N"] == "R/(z)"}
    for j in (1, 2, 3):
        if zs.get(j) != "ZERO":
            problems.append(f"Tor_{j}(M, R/(z)) {zs.get(j)}")
    report(capsys, 6, problems, f"sequence {[str(e) for e in cert.elements]}, Tor_j(M,R/(z)) = 0 for j=1,2,3", t0)


def test_criterion_7_kernel_oracle(capsys):
    t0 = time.perf_counter()
    problems = []
    rng = random.Random(2024)
    checked = 0
    for k in range(20):
        r = rng.randint(1, 3)
        tgt = sorted(rng.randint(0, 1) for _ in range(r))
        src = sorted(rng.randint(max(tgt) + 1, max(tgt) + 2) for _ in range(rng.randint(1, 4)))
        A = random_presentation(R, tgt, src, rng).relations
        K = syzygy_matrix(A)
        if not A.compose(K).is_zero():
            problems.append(f"map {k}: syzygies not in the kernel")
        D = min(8, max(src) + 3)
        for d in range(D + 1):
            want = oracles.kernel_dim(3, A.columns, A.source.twists, d)
            got = oracles.map_rank(3, K.columns, K.source.twists, d)
            checked += 1
            if got != want:
                problems.append(f"map {k} degree {d}: {got} != {want}")
    report(capsys, 7, problems, f"20 random maps, {checked} graded pieces match dense kernels", t0)


def test_criterion_8_determinism(capsys):
    t0 = time.perf_counter()
    problems = []
    text = SESSION.read_text()
    a = run_text(text, seed=11).dumps()
    b = run_text(text, seed=11).dumps()
    if a != b:
        problems.append("JSON reports differ")
    report(capsys, 8, problems, f"two runs of {SESSION.name} give identical {len(a)}-byte JSON", t0)

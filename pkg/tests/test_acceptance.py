"""Exit criteria. Each test is one criterion; a PASS/FAIL summary is printed at the end."""
import io
import itertools
import math
import time

import numpy as np
import pytest

from censorgame import (
    Protocol,
    ProtocolMix,
    UtilityParams,
    censor_best_response,
    censor_best_response_separable,
    count_distributor_strategies,
    enumerate_censor_actions,
    enumerate_distributor_strategies,
    eval_utility,
    find_equilibrium,
)
from censorgame.cli import run
from censorgame.model import PAPER_MIX_CSV
from censorgame.report import build_grid, render_heatmap_svg, write_grid_csv

# mpmath, 40 digits
MP_U_0_0_D175 = -15.12543086461000903714615283068250939852
MP_U_50_0_D075 = -26.42411176571153568089524596770782651084


@pytest.fixture(scope="module")
def paper_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("mix") / "paper.csv"
    path.write_text(PAPER_MIX_CSV)
    return str(path)


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    assert code == 0, err.getvalue()
    return out.getvalue()


def _mix(covers):
    return ProtocolMix(tuple(Protocol(f"p{i}", c) for i, c in enumerate(covers)))


def test_ac01_strategy_space_counts(paper_csv, mix):
    start = time.perf_counter()
    printed = _cli(["enumerate", "--mix", paper_csv, "--quantum", "5", "--count-only"])
    elapsed = time.perf_counter() - start
    assert printed == "282\n"
    assert len(enumerate_censor_actions(mix)) == 64
    assert elapsed < 1.0


def test_ac02_equilibrium_tolerant_censor(mix, tolerant):
    start = time.perf_counter()
    grid = build_grid(mix, tolerant)
    eq = find_equilibrium(mix, tolerant)
    elapsed = time.perf_counter() - start
    assert grid.shape == (282, 64)
    assert eq.strategy.shares == (20, 20, 20, 20, 20, 0)
    assert eq.response.names(mix) == ["HTTP", "BitTorrent", "SSL", "MPEG"]
    assert eq.leak == 20
    assert elapsed < 5.0


def test_ac03_equilibrium_leak_intolerant_censor(mix, intolerant):
    eq = find_equilibrium(mix, intolerant)
    assert eq.strategy.shares == (95, 5, 0, 0, 0, 0)
    assert eq.response.names(mix) == ["YouTube"]
    assert eq.leak == 5


def test_ac04_negative_example_blocks_both(mix, intolerant):
    br = censor_best_response(mix, intolerant, (80, 10, 10, 0, 0, 0))
    assert {0, 1} <= br.action.blocked
    assert br.outcome.t >= 90


def test_ac05_utility_properties():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        p = UtilityParams(-rng.uniform(0.001, 0.05), rng.uniform(0.5, 5.0))
        t, f = rng.uniform(0, 100), rng.uniform(0, 100)
        u = eval_utility(p, t, f)
        assert -100 < u <= 100
        assert u < 100 or (t == 100 and f == 0)
        dt, df = rng.uniform(0.01, 10), rng.uniform(0.01, 10)
        if t + dt <= 100:
            assert eval_utility(p, t + dt, f) > u
        assert eval_utility(p, t, f + df) < u
    p = UtilityParams(-0.015, 1.75)
    assert eval_utility(p, 100, 0) == 100
    assert eval_utility(p, 0, 0) == pytest.approx(-15.12, abs=0.01)
    assert eval_utility(p, 0, 0) == pytest.approx(MP_U_0_0_D175, abs=1e-9)
    q = UtilityParams(-0.015, 0.75)
    assert eval_utility(q, 50, 0) == pytest.approx(-26.42, abs=0.01)
    assert eval_utility(q, 50, 0) == pytest.approx(MP_U_50_0_D075, abs=1e-9)
    fs = np.concatenate([np.linspace(0, 100, 4001), [1e3, 1e6]])
    assert np.all(eval_utility(q, np.full_like(fs, 50), fs) < 0)


def test_ac06_oracle_equivalence(mix, tolerant, intolerant):
    mismatches = 0
    for params in (tolerant, intolerant):
        for s in enumerate_distributor_strategies(mix, 5):
            a = censor_best_response(mix, params, s).action
            b = censor_best_response_separable(mix, params, s).action
            mismatches += a != b
    rng = np.random.default_rng(99)
    quanta = [5, 10, 20, 25]
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        covers = rng.uniform(0, 100 / n, n)
        m = _mix(covers.tolist())
        params = UtilityParams(-rng.uniform(0.001, 0.1), rng.uniform(0.2, 5.0), int(rng.choice(quanta)))
        strategies = enumerate_distributor_strategies(m, params.quantum)
        s = strategies[rng.integers(len(strategies))]
        a = censor_best_response(m, params, s).action
        b = censor_best_response_separable(m, params, s).action
        mismatches += a != b
    assert mismatches == 0


def test_ac07_counting_oracle():
    mismatches = [
        (n, q)
        for n in range(1, 7)
        for q in (5, 10, 20, 25, 50)
        if len(enumerate_distributor_strategies(n, q)) != count_distributor_strategies(n, q)
    ]
    assert mismatches == []


def test_ac08_dominance_bijection():
    """For each non-aligned d with witness (a, b), swapped d' and the action map
    sigma that swaps membership of a and b: utility(sigma(A), d') <= utility(A, d)."""
    violations = []
    params = UtilityParams(-0.015, 1.75, 10)
    for covers in ([7.0, 3.0], [9.0, 4.5, 1.2], [13.25, 8.47, 5.03, 2.63]):
        m = _mix(covers)
        n = len(m)
        for d in itertools.product(range(0, 101, 10), repeat=n):
            if sum(d) != 100:
                continue
            for a, b in itertools.permutations(range(n), 2):
                if not (d[a] > d[b] and m[a].cover_share < m[b].cover_share):
                    continue
                d2 = list(d)
                d2[a], d2[b] = d2[b], d2[a]
                for mask in range(1 << n):
                    blocked = {i for i in range(n) if mask >> i & 1}
                    swapped = {b if i == a else a if i == b else i for i in blocked}
                    u = _raw_utility(m, params, d, blocked)
                    u2 = _raw_utility(m, params, d2, swapped)
                    if u2 > u:
                        violations.append((covers, d, (a, b), sorted(blocked), u, u2))
    assert not violations, (
        f"{len(violations)} violations; first: covers={violations[0][0]} d={violations[0][1]} "
        f"witness={violations[0][2]} A={violations[0][3]} "
        f"U(A,d)={violations[0][4]:.6f} < U(sigma(A),d')={violations[0][5]:.6f}"
    )


def _raw_utility(m, params, shares, blocked):
    t = sum(shares[i] for i in blocked)
    f = sum(m[i].cover_share for i in sorted(blocked))
    return eval_utility(params, t, f)


def test_ac09_argmax_invariance(mix, tolerant, intolerant):
    for params in (tolerant, intolerant):
        base = find_equilibrium(mix, params).strategy
        for transform in (lambda t: -math.sqrt(t), lambda t: math.exp(-0.1 * t)):
            assert find_equilibrium(mix, params, leader_utility=transform).strategy == base


def test_ac10_grid_determinism(paper_csv, mix, tmp_path):
    outputs = []
    for run_id, workers in enumerate(["1", "1", "4"]):
        csv_path, svg_path = tmp_path / f"g{run_id}.csv", tmp_path / f"g{run_id}.svg"
        _cli(["grid", "--mix", paper_csv, "--c", "-0.015", "--d", "1.75",
              "--csv", str(csv_path), "--svg", str(svg_path), "--workers", workers])
        outputs.append((csv_path.read_bytes(), svg_path.read_bytes()))
    assert outputs[0] == outputs[1] == outputs[2]

    # other backend, same bytes
    alt = build_grid(mix, UtilityParams(-0.015, 1.75), backend="numpy", workers=3)
    assert write_grid_csv(alt).encode() == outputs[0][0]
    assert render_heatmap_svg(alt).encode() == outputs[0][1]

    svg = outputs[0][1].decode()
    assert svg.count('fill="none"') == 282
    assert svg.count('stroke="#ff0000"') == 1
    assert svg.count('class="equilibrium"') == 1

import itertools
import json

import pytest

import ultradense as ud


def closure_size(gens, n):
    seen = {tuple(range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def perm_from_cycles(text, n):
    img = list(range(n))
    for cyc in text.strip("()").split(")("):
        pts = [int(t) - 1 for t in cyc.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def test_validate_nkomega_pairs():
    # even vertices lie on line 1, odd on line 2
    assert ud.validate("nkomega", 2, [(1, 5), (0, 2)]) == [(0, 2), (1, 5)]


def test_validate_rejects_index_conflict():
    with pytest.raises(ud.IsoRejection):
        ud.validate("nkomega", 2, [(0, 2), (1, 4)])


def test_compose_and_power_match_dicts():
    f = [(1, 2), (2, 3), (3, 4)]
    g = [(2, 7), (4, 9)]
    fd, gd = dict(f), dict(g)
    want = sorted((x, gd[y]) for x, y in f if y in gd)
    assert ud.compose(f, g) == want
    assert ud.power(f, 2) == [(1, 3), (2, 4)]
    assert ud.power(f, -1) == sorted((y, x) for x, y in fd.items())


def test_components_of_a_path():
    (c,) = ud.components([(1, 2), (2, 3)])
    assert c["vertices"] == [1, 2, 3] and not c["complete"]


def test_words_reduce_freely():
    assert ud.reduce_word("a a^-1 b^2 b^-1") == "b"
    assert ud.reduce_word("a^-1 a") == "1"


def test_evaluate_word_against_tables():
    p = [(0, 1), (2, 5)]
    f = [(1, 2)]
    # a b a: 0 -> 1 -> 2 -> 5
    assert ud.evaluate_word("a b a", p, f) == [(0, 5)]
    with pytest.raises(ud.Error):
        ud.evaluate_word("b", p, f)


@pytest.mark.parametrize("n", [3, 4])
def test_piccard_partner_generates(n):
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        cycles = "(" + ")(".join(
            " ".join(str(i + 1) for i in c) for c in cycle_list(perm) if len(c) > 1
        ) + ")"
        b = ud.piccard_partner(cycles, n)
        exceptional = n == 4 and sorted(len(c) for c in cycle_list(perm)) == [2, 2]
        if exceptional:
            assert b is None
        else:
            assert b is not None
            size = closure_size([perm, perm_from_cycles(b, n)], n)
            assert size == len(list(itertools.permutations(range(n))))


def cycle_list(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = perm[j]
        out.append(c)
    return out


def test_sigma_feasible_shapes():
    # one point per component on n = 1 always fits
    assert ud.sigma_feasible(1, {0: 1, 1: 1}) is not None
    # a single component carrying fewer than n points cannot fill a part
    assert ud.sigma_feasible(2, {0: 1}) is None


@pytest.mark.parametrize("family,n,sigma", [
    ("henson", 3, 0), ("omega-kn", 2, 2), ("nkomega", 3, 0), ("n2", 2, 0)])
def test_trial_certificates_verify(family, n, sigma):
    t = ud.run_trial(family, n, 11, sigma)
    assert t["pass"], t["detail"]
    rep = ud.verify(t["certificate"])
    assert rep["ok"]
    assert all(rep["clauses"].values())


def test_tampered_certificate_fails():
    t = ud.run_trial("nkomega", 3, 11)
    cert = json.loads(t["certificate"])
    cert["target"] = [[x, y + 3] for x, y in cert["target"]]
    rep = ud.verify(json.dumps(cert))
    assert not rep["ok"]


def test_campaign_is_deterministic():
    spec = {"family": "omega-kn", "sizes": [2], "trials": 5, "seed": 3,
            "sigma_size": 2}
    a, b = ud.run_campaign(spec), ud.run_campaign(spec)
    assert a["passed"] == 5
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_unknown_family_is_hypothesis_error():
    with pytest.raises(ud.HypothesisError):
        ud.run_trial("nope", 3, 1)

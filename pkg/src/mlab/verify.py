"""Verification suites: every desk-checkable statement on explicit
instances, each deterministic given (genus, seed, samples).
"""

import random
import time

from . import construct, surgery
from .arcs import band_sum, connect_arc
from .arrange import overlay
from .complexes import (
    build_subcomplex,
    complex_dim,
    cutsys_path,
    is_cutsys_edge,
    link,
    max_clique,
    split_join,
)
from .curves import CurveClass, trace
from .errors import MlabError, PreconditionError, VerificationFailure
from .handlebody import classify, delta, is_meridian, validate_cut_system
from .mcg import MCGMap, apply_map, enumerate_meridians, phi_m
from .model import build_model
from .surface import cut_along, standard_family, std_curve

SUITES = {}


def suite(name):
    def wrap(fn):
        SUITES[name] = fn
        return fn

    return wrap


class VerificationReport:
    def __init__(self, suite_name, genus, seed, samples):
        self.suite = suite_name
        self.genus = genus
        self.seed = seed
        self.samples = samples
        self.instances = 0
        self.failures = []
        self.elapsed = 0.0

    def check(self, instance_id, expected, got):
        self.instances += 1
        if expected != got:
            self.failures.append((str(instance_id), str(expected), str(got)))

    def ok(self):
        return not self.failures

    def summary(self):
        status = "ok" if self.ok() else "FAIL"
        return (
            f"{self.suite} genus={self.genus} seed={self.seed}: "
            f"{self.instances} checks, {len(self.failures)} failures [{status}]"
        )


def run_suite(name, genus, seed=0, samples=0, depth=0):
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}")
    t0 = time.time()
    rep = SUITES[name](genus=genus, seed=seed, samples=samples, depth=depth)
    rep.elapsed = time.time() - t0
    return rep


# -- shared pools ---------------------------------------------------------------

_BAND_CACHE = {}


def band_meridian(model, i, j):
    """Non-separating meridian band-summing B(i) and B(j)."""
    key = (model.g, i, j)
    if key not in _BAND_CACHE:
        avoid = [
            std_curve(model, "petal", k)
            for k in range(1, model.g + 1)
            if k not in (i, j)
        ]
        out, _arc = band_sum(
            model, std_curve(model, "b", i), std_curve(model, "b", j), avoid=avoid
        )
        _BAND_CACHE[key] = out
    return _BAND_CACHE[key]


def meridian_twist_pool(model):
    g = model.g
    pool = [std_curve(model, "b", i) for i in range(1, g + 1)]
    pool += [std_curve(model, "petal", i) for i in range(1, g + 1)]
    pool += [band_meridian(model, i, i + 1) for i in range(1, g)]
    return pool


def curve_pool(model):
    g = model.g
    pool = [std_curve(model, "a", i) for i in range(1, g + 1)]
    pool += [std_curve(model, "b", i) for i in range(1, g + 1)]
    pool += [std_curve(model, "petal", i) for i in range(1, g + 1)]
    pool += [std_curve(model, "group", k) for k in range(2, g - 1)]
    return pool


def random_meridian_map(model, rng, max_len):
    pool = meridian_twist_pool(model)
    n = rng.randint(1, max_len)
    word = [
        (rng.choice(pool), rng.choice([1, -1, 2, -2])) for _ in range(n)
    ]
    return MCGMap(word, handlebody_mode=True)


def random_orbit_curve(model, rng, max_len=4):
    seeds = curve_pool(model)
    c = rng.choice(seeds)
    pool = meridian_twist_pool(model) + [
        std_curve(model, "a", i) for i in range(1, model.g + 1)
    ]
    for _ in range(rng.randint(0, max_len)):
        c = construct.twist(rng.choice(pool), c, rng.choice([1, -1, 2]))
    return c


# -- suites -----------------------------------------------------------------------


@suite("dim-sm")
def suite_dim_sm(genus, seed, samples, depth):
    rep = VerificationReport("dim-sm", genus, seed, samples)
    model = build_model(genus)
    fam = standard_family(model)
    rep.check("family-size", 2 * genus - 3, len(fam))
    names = sorted(fam)
    for i, a in enumerate(names):
        info = classify(fam[a])
        rep.check(f"{a}-sep-meridian", True, info.is_meridian and info.separating)
        for b in names[i + 1 :]:
            rep.check(
                f"disjoint-{a}-{b}",
                0,
                construct.intersection_number(fam[a], fam[b]),
            )
    fc = build_subcomplex(fam)
    rep.check("vertex-count", 2 * genus - 3, len(fc.vertices()))
    rep.check("dimension", 2 * genus - 4, complex_dim(fc))
    return rep


def _side_family(model, handles, avoid):
    """Separating meridians filling the subsurface over the given handles:
    petals plus chain groups, 2*len(handles)-2 pairwise disjoint curves."""
    petals = [std_curve(model, "petal", i) for i in handles]
    out = list(petals)
    cur = petals[0]
    for j in range(1, len(handles) - 1):
        cur, _arc = band_sum(
            model,
            cur,
            petals[j],
            avoid=[c for c in avoid + petals if c.weights != cur.weights
                   and c.weights != petals[j].weights],
        )
        out.append(cur)
    return out


def _side_band_meridian(model, h, avoid):
    """Band meridian of B(h), B(h+1) staying clear of the avoid curves."""
    out, _arc = band_sum(
        model,
        std_curve(model, "b", h),
        std_curve(model, "b", h + 1),
        avoid=[
            std_curve(model, "petal", t)
            for t in range(1, model.g + 1)
            if t not in (h, h + 1)
        ]
        + list(avoid),
    )
    return out


def _link_sample(model, k):
    """Sampled subcomplex of Lk(D) for the standard (k, g-k)-meridian."""
    g = model.g
    d_curve = std_curve(model, "group", k) if k >= 2 else std_curve(model, "petal", 1)
    lo = list(range(1, k + 1))
    hi = list(range(k + 1, g + 1))
    side0 = _side_family(model, lo, avoid=[d_curve])
    side1 = _side_family(model, hi, avoid=[d_curve])
    named = {}
    for i, c in enumerate(side0):
        named[f"k{i}"] = c
    for i, c in enumerate(side1):
        named[f"l{i}"] = c
    # intersecting witnesses inside each side: petals twisted about a
    # band meridian supported in the side
    extra = 0
    for handles in (lo, hi):
        h = handles[0]
        m = _side_band_meridian(model, h, avoid=[d_curve])
        p_h = std_curve(model, "petal", h)
        p_h1 = std_curve(model, "petal", h + 1)
        for n in (1, -1, 2):
            named[f"x{extra}"] = construct.twist(m, p_h, n)
            extra += 1
        for n in (1, -1, 2):
            named[f"x{extra}"] = construct.twist(m, p_h1, n)
            extra += 1
    return d_curve, named


@suite("link-split")
def suite_link_split(genus, seed, samples, depth):
    rep = VerificationReport("link-split", genus, seed, samples)
    model = build_model(genus)
    ks = sorted({k for k in range(2, genus - 1)})
    for k in ks:
        d_curve, named = _link_sample(model, k)
        for name, c in sorted(named.items()):
            rep.check(
                f"k{k}-{name}-in-link",
                0,
                construct.intersection_number(c, d_curve),
            )
            info = classify(c)
            rep.check(
                f"k{k}-{name}-sep-meridian",
                True,
                info.is_meridian and info.separating,
            )
        fc = build_subcomplex(named)
        rep.check(f"k{k}-size>=12", True, len(fc.vertices()) >= 12)
        # side membership via the cut pieces, marked by A(1) on side 0
        marker = std_curve(model, "a", 1)
        sides = {}
        for name in fc.vertices():
            pieces = cut_along(
                model,
                {"d": d_curve},
                tracked={"c": fc.curves[name], "mark": marker},
            )
            inside = next(p for p in pieces if "c" in p.content)
            sides[name] = 0 if "mark" in inside.content else 1
        res = split_join(fc, side_of=lambda n: sides[n])
        rep.check(f"k{k}-splits", True, res.splits)
        if res.splits:
            part_sides = [
                {sides[n] for n in part} for part in res.parts
            ]
            rep.check(
                f"k{k}-parts-match-sides",
                True,
                part_sides[0] == {0} and part_sides[1] == {1}
                or part_sides[0] == {1} and part_sides[1] == {0},
            )
            # at least two intersecting pairs per side
            for pi, part in enumerate(res.parts):
                sub = fc.induced(part)
                non_edges = sum(
                    1
                    for i, a in enumerate(sub.names)
                    for b in sub.names[i + 1 :]
                    if not sub.adjacent(a, b)
                )
                rep.check(f"k{k}-part{pi}-witnesses", True, non_edges >= 2)
            sizes = sorted(
                len(max_clique(fc.induced(part))) for part in res.parts
            )
            rep.check(
                f"k{k}-clique-sizes",
                sorted((2 * k - 2, 2 * (genus - k) - 2)),
                sizes,
            )
    return rep


def p_content(piece):
    return piece.content


@suite("link-nonsplit")
def suite_link_nonsplit(genus, seed, samples, depth):
    """Witness subcomplexes of Lk(D) for (1,g-1)-meridians report no
    split: the sample is built so intersecting pairs tie every would-be
    part together."""
    rep = VerificationReport("link-nonsplit", genus, seed, samples)
    model = build_model(genus)
    d_curve = std_curve(model, "petal", 1)
    hi = list(range(2, genus + 1))
    fam = _side_family(model, hi, avoid=[d_curve])
    named = {f"v{i}": c for i, c in enumerate(fam)}
    # band-meridian twists tie consecutive handles together
    for h in range(2, genus):
        m = _side_band_meridian(model, h, avoid=[d_curve])
        named[f"y{h}"] = construct.twist(m, std_curve(model, "petal", h), 1)
        named[f"z{h}"] = construct.twist(
            m, std_curve(model, "petal", h + 1), -1
        )
    fc = build_subcomplex(named)
    for name in fc.vertices():
        rep.check(
            f"{name}-in-link",
            0,
            construct.intersection_number(fc.curves[name], d_curve),
        )
        info = classify(fc.curves[name])
        rep.check(
            f"{name}-sep-meridian",
            True,
            info.is_meridian and info.separating,
        )
    res = split_join(fc)
    rep.check("no-split", False, res.splits)
    return rep


@suite("join-arith")
def suite_join_arith(genus, seed, samples, depth):
    rep = VerificationReport("join-arith", genus, seed, samples)
    model = build_model(genus)
    rng = random.Random(seed)
    g = genus
    # interval-supported separating meridians with known side genera
    intervals = []
    for a in range(1, g + 1):
        for b in range(a, g + 1):
            glen = b - a + 1
            if glen <= g - 2:
                intervals.append((a, b))

    def interval_curve(a, b):
        if a == b:
            return std_curve(model, "petal", a)
        cur = std_curve(model, "petal", a)
        for j in range(a + 1, b + 1):
            cur, _ = band_sum(
                model,
                cur,
                std_curve(model, "petal", j),
                avoid=[
                    std_curve(model, "petal", t)
                    for t in range(1, g + 1)
                    if t < a or t > b
                ],
            )
        return cur

    cache = {}
    count = 0
    trials = 0
    while count < samples and trials < samples * 20:
        trials += 1
        (a1, b1) = rng.choice(intervals)
        (a2, b2) = rng.choice(intervals)
        if not (b1 < a2 or b2 < a1):
            continue
        g1, g2 = b1 - a1 + 1, b2 - a2 + 1
        if g1 + g2 >= g:
            continue
        if (a1, b1) not in cache:
            cache[(a1, b1)] = interval_curve(a1, b1)
        if (a2, b2) not in cache:
            cache[(a2, b2)] = interval_curve(a2, b2)
        d1, d2 = cache[(a1, b1)], cache[(a2, b2)]
        joined, _arc = band_sum(model, d1, d2)
        info = classify(joined)
        rep.check(
            f"join-{a1}.{b1}-{a2}.{b2}-#{count}",
            (True, True, tuple(sorted((g1 + g2, g - g1 - g2)))),
            (info.is_meridian, info.separating, info.genus_type),
        )
        count += 1
    return rep


@suite("chain")
def suite_chain(genus, seed, samples, depth):
    """Iterated spot-pair joins reaching a (2, g-2)-meridian."""
    rep = VerificationReport("chain", genus, seed, samples)
    model = build_model(genus)
    g = genus
    bs = {i: std_curve(model, "b", i) for i in range(1, g + 1)}
    from .handlebody import dual_curve

    sigma = dual_curve(bs[2], [bs[j] for j in range(1, g + 1) if j != 2])
    w = construct.band_double(bs[2], sigma)
    rep.check("chain-e2-type", (1, g - 1), classify(w).genus_type)
    for j in range(3, g):
        avoid = [bs[t] for t in range(1, g + 1) if t != j]
        y, _ = band_sum(model, w, bs[j], avoid=avoid)
        rep.check(f"chain-y{j}-nonsep", False, y.is_separating())
        # attach the second copy of B(j): scan variants for the separating
        # band sum
        nxt = None
        for variant in range(16):
            try:
                cand, _arc = _band_sum_variant(model, y, bs[j], avoid, variant)
            except PreconditionError:
                break
            info = classify(cand)
            if info.separating and info.is_meridian:
                want = tuple(sorted((j - 1, g - j + 1)))
                if info.genus_type == want:
                    nxt = cand
                    break
        rep.check(f"chain-e{j}-found", True, nxt is not None)
        if nxt is None:
            return rep
        w = nxt
    rep.check("chain-final-type", (2, g - 2), classify(w).genus_type)
    return rep


def _band_sum_variant(model, d1, d2, avoid, variant):
    """The variant-th embeddable band sum of d1, d2, deterministic order."""
    from .arcs import connect_arc as _ca, join as _join
    from .arrange import overlay as _ov
    from .errors import NonSimpleCurveError

    named = {"d1": d1, "d2": d2}
    for i, c in enumerate(avoid):
        named[f"av{i}"] = c
    arr = _ov(model, named)
    good = 0
    for skip in range(48):
        arc = _ca(
            arr,
            "d1",
            "d2",
            avoid=[n for n in named if n.startswith("av")],
            name="tau",
            skip=skip,
        )
        if arc is None:
            raise PreconditionError("no more variants")
        try:
            out = _join(d1, d2, arc)
        except NonSimpleCurveError:
            out = None
        for p in arc.owner.all_points():
            arr.edge_points[p.edge].remove(p)
        del arr.owners["tau"]
        arr.invalidate()
        if out is None:
            continue
        if good == variant:
            return out, None
        good += 1
    raise PreconditionError("no more variants")


@suite("delta-natural")
def suite_delta_natural(genus, seed, samples, depth):
    rep = VerificationReport("delta-natural", genus, seed, samples)
    model = build_model(genus)
    rng = random.Random(seed)
    g = genus
    petals = [std_curve(model, "petal", i) for i in range(1, g + 1)]
    for i in range(samples):
        x = rng.choice(petals)
        prep = random_meridian_map(model, rng, 2)
        x = apply_map(prep, x)
        if classify(x).genus_type != (1, g - 1):
            rep.check(f"sample-{i}-type", (1, g - 1), classify(x).genus_type)
            continue
        m = random_meridian_map(model, rng, 2)
        lhs = delta(apply_map(m, x))
        rhs = apply_map(m, delta(x))
        rep.check(f"natural-{i}", rhs.weights, lhs.weights)
    # phi_m: choice independence and agreement with the direct image
    bs = [std_curve(model, "b", i) for i in range(1, g + 1)]
    for i in range(samples):
        d = rng.choice(bs)
        prep = random_meridian_map(model, rng, 1)
        d = apply_map(prep, d)
        if d.is_separating() or not is_meridian(d):
            continue
        m = random_meridian_map(model, rng, 2)
        try:
            out0 = phi_m(m, d, variant=0)
            out1 = phi_m(m, d, variant=1)
        except (MlabError, PreconditionError, VerificationFailure) as exc:
            rep.check(f"phi-{i}", "ok", f"error {exc}")
            continue
        direct = apply_map(m, d)
        rep.check(f"phi-choice-{i}", out0.weights, out1.weights)
        rep.check(f"phi-direct-{i}", direct.weights, out0.weights)
    return rep


@suite("intersection-preserve")
def suite_intersection(genus, seed, samples, depth):
    rep = VerificationReport("intersection-preserve", genus, seed, samples)
    model = build_model(genus)
    rng = random.Random(seed)
    pool = curve_pool(model)
    for i in range(samples):
        x = rng.choice(pool)
        y = rng.choice(pool)
        for _ in range(rng.randint(0, 2)):
            t = rng.choice(meridian_twist_pool(model))
            which = rng.random()
            if which < 0.5:
                x = construct.twist(t, x, rng.choice([1, -1]))
            else:
                y = construct.twist(t, y, rng.choice([1, -1]))
        m = random_meridian_map(model, rng, 6)
        base = construct.intersection_number(x, y)
        img = construct.intersection_number(apply_map(m, x), apply_map(m, y))
        rep.check(f"pair-{i}", base, img)
    return rep


@suite("stripes")
def suite_stripes(genus, seed, samples, depth):
    rep = VerificationReport("stripes", genus, seed, samples)
    model = build_model(genus)
    g = genus
    bs = {i: std_curve(model, "b", i) for i in range(1, g + 1)}
    a2 = std_curve(model, "a", 2)
    p1 = std_curve(model, "petal", 1)
    p2 = std_curve(model, "petal", 2)
    m12 = band_meridian(model, 1, 2)
    sigma = construct.twist(m12, a2, 1)
    e_curve = construct.band_double(bs[2], sigma)
    rep.check("pre-sep-type", (1, g - 1), classify(e_curve).genus_type)
    rep.check("pre-delta", bs[2].weights, delta(e_curve).weights)
    rep.check(
        "pre-disjoint-delta-z",
        0,
        construct.intersection_number(e_curve, bs[1]),
    )
    # disjoint case: empty report
    rep0, _ = surgery.find_stripes(p2, p1)
    rep.check("disjoint-empty", (0, True), (len(rep0.arcs), rep0.all_stripes))
    # near-side stripes: all boundary-parallel, elimination to zero
    report, _ = surgery.find_stripes(e_curve, p1)
    rep.check("arcs-even", 0, len(report.arcs) % 2)
    rep.check("all-stripes", True, report.all_stripes)
    cur = e_curve
    steps = 0
    while construct.intersection_number(cur, p1) > 0 and steps < 8:
        before = construct.intersection_number(cur, p1)
        cur = surgery.eliminate_stripe(cur, p1)
        after = construct.intersection_number(cur, p1)
        rep.check(f"elim-step-{steps}-drops", True, after < before)
        rep.check(f"elim-step-{steps}-even", 0, (before - after) % 2)
        rep.check(
            f"elim-step-{steps}-type", (1, g - 1), classify(cur).genus_type
        )
        rep.check(f"elim-step-{steps}-delta", bs[2].weights, delta(cur).weights)
        steps += 1
    rep.check("elim-final-disjoint", 0, construct.intersection_number(cur, p1))
    # far-side reduction to zero with delta preserved
    cur = e_curve
    steps = 0
    while construct.intersection_number(cur, p2) > 0 and steps < 8:
        before = construct.intersection_number(cur, p2)
        cur = surgery.reduce_intersection(cur, p2)
        after = construct.intersection_number(cur, p2)
        rep.check(f"reduce-step-{steps}-pair", True, after <= before - 2)
        rep.check(
            f"reduce-step-{steps}-delta", bs[2].weights, delta(cur).weights
        )
        steps += 1
    rep.check("reduce-final-disjoint", 0, construct.intersection_number(cur, p2))
    rep.check("reduce-identity", True, surgery.reduce_intersection(p2, p1) is p2)
    return rep


@suite("surgery4")
def suite_surgery4(genus, seed, samples, depth):
    rep = VerificationReport("surgery4", genus, seed, samples)
    model = build_model(genus)
    g = genus
    # two separating meridians crossing twice: overlapping handle intervals
    x_curve, _ = band_sum(
        model,
        std_curve(model, "petal", 1),
        std_curve(model, "petal", 2),
        avoid=[std_curve(model, "petal", t) for t in range(3, g + 1)],
    )
    y_curve, _ = band_sum(
        model,
        std_curve(model, "petal", 2),
        std_curve(model, "petal", 3),
        avoid=[
            std_curve(model, "petal", t)
            for t in (1,) + tuple(range(4, g + 1))
        ],
    )
    n = construct.intersection_number(x_curve, y_curve)
    rep.check("pre-crossing-twice", 2, n)
    if n != 2:
        return rep
    outs = construct.surgery_along_arc(x_curve, y_curve)
    rep.check("four-outputs", 4, len(outs))
    for i, w in enumerate(outs):
        info = classify(w)
        rep.check(f"w{i}-sep-meridian", (True, True), (info.is_meridian, info.separating))
        rep.check(
            f"w{i}-disjoint-x", 0, construct.intersection_number(w, x_curve)
        )
        rep.check(
            f"w{i}-disjoint-y", 0, construct.intersection_number(w, y_curve)
        )
    return rep


@suite("claim1")
def suite_claim1(genus, seed, samples, depth):
    rep = VerificationReport("claim1", genus, seed, samples)
    model = build_model(genus)
    g = genus
    depth = depth or 4
    bs = [std_curve(model, "b", i) for i in range(1, g + 1)]
    petals = [std_curve(model, "petal", i) for i in range(1, g + 1)]
    gens = []
    for t in bs + petals + [band_meridian(model, i, i + 1) for i in range(1, g)]:
        for n in (1, -1):
            gens.append(MCGMap([(t, n)], handlebody_mode=True))
    b_keys = {c.weights for c in bs}

    def is_disjoint_11_meridian(c):
        if any(construct.intersection_number(c, b) != 0 for b in bs):
            return False
        info = classify(c)
        return info.is_meridian and info.genus_type == (1, g - 1)

    found = enumerate_meridians(
        petals, gens, depth, filt=is_disjoint_11_meridian, cap=40000
    )
    rep.check("enumeration-nonempty", True, len(found) > 2)
    for i, x in enumerate(found):
        d = delta(x)
        rep.check(f"x{i}-delta-in-system", True, d.weights in b_keys)
    return rep


@suite("cutsys-path")
def suite_cutsys_path(genus, seed, samples, depth):
    rep = VerificationReport("cutsys-path", genus, seed, samples)
    model = build_model(genus)
    g = genus
    bs = [std_curve(model, "b", i) for i in range(1, g + 1)]
    base = validate_cut_system(bs)
    m12 = band_meridian(model, 1, 2)
    m23 = band_meridian(model, 2, 3)
    word = MCGMap([(m12, 1), (m23, 1)], handlebody_mode=True)
    target = validate_cut_system([apply_map(word, c) for c in bs])
    pool = list(bs) + [m12, m23]
    pool += [apply_map(word, c) for c in pool]
    pool += [apply_map(MCGMap([(m12, 1)]), c) for c in bs]
    dedup = {}
    for c in pool:
        dedup[c.weights] = c
    pool = [dedup[k] for k in sorted(dedup)]
    path = cutsys_path(base, target, pool, bound=8)
    rep.check("path-found", True, path is not None)
    if path:
        rep.check("path-starts", base.key(), path[0].key())
        rep.check("path-ends", target.key(), path[-1].key())
        for i in range(len(path) - 1):
            rep.check(
                f"edge-{i}-rule", True, is_cutsys_edge(path[i], path[i + 1])
            )
            validate_cut_system(path[i + 1].curves)
    rep.check(
        "trivial-path", 1, len(cutsys_path(base, base, pool, bound=8) or [])
    )
    return rep


@suite("word-homology")
def suite_word_homology(genus, seed, samples, depth):
    rep = VerificationReport("word-homology", genus, seed, samples)
    model = build_model(genus)
    rng = random.Random(seed)
    for i in range(samples):
        c = random_orbit_curve(model, rng)
        # normal-coordinate round trip
        traced = trace(model, c.weights)
        rep.check(f"c{i}-one-component", 1, len(traced.components))
        back = CurveClass.from_cycle(model, traced.components[0])
        rep.check(f"c{i}-roundtrip", c.weights, back.weights)
        # separating <=> homology zero <=> two pieces; chi conservation
        sep_h = c.is_separating()
        pieces = cut_along(model, {"c": c})
        rep.check(f"c{i}-pieces", 2 if sep_h else 1, len(pieces))
        chi = sum(p.chi for p in pieces)
        rep.check(f"c{i}-chi", 2 - 2 * genus, chi)
        # meridian => zero a-part of homology
        if is_meridian(c):
            h = c.homology()
            rep.check(
                f"c{i}-meridian-apart",
                True,
                all(h[2 * t] == 0 for t in range(genus)),
            )
    return rep

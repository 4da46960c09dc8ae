//! One pass/fail line per acceptance criterion.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use hyperci::ciideals::*;
use hyperci::decomp::*;
use hyperci::indexcomb::{CellGrid, ComponentSet, IndexTuple, Shape};
use hyperci::polyengine::ideal::{first_outside, iterated_quotient};
use hyperci::polyengine::{
    ideal_contains, ideal_quotient, ideals_equal, is_groebner_basis, minimal_generator_count, Monomial, MonomialOrder,
    Polynomial, DEFAULT_PAIR_BUDGET as B,
};
use hyperci::switchable::*;
use hyperci::Result;

fn grid(dims: &[usize], t: usize) -> Arc<CellGrid> {
    Arc::new(CellGrid::new(&Shape::new(dims.to_vec(), t).unwrap()).unwrap())
}

fn switchable_sets(g: &Arc<CellGrid>, t: usize) -> Result<Vec<SwitchableSet>> {
    enumerate_switchable(g, t, 20)?.into_iter().map(|m| SwitchableSet::with_t(g.clone(), t, m)).collect()
}

fn check(msg: &mut Vec<String>, ok: bool, what: impl Into<String>) -> bool {
    if !ok {
        msg.push(what.into());
    }
    ok
}

type Outcome = Result<Vec<String>>;

fn minimal_prime_counts() -> Outcome {
    let mut bad = Vec::new();
    for (dims, t, want) in [
        (&[2, 2, 2, 2][..], 1, 17),
        (&[2, 2, 2, 2][..], 2, 31),
        (&[2, 2, 2, 2][..], 3, 17),
        (&[2, 2, 2, 2][..], 4, 17),
        (&[2, 2, 4][..], 2, 29),
        (&[2, 2, 4][..], 3, 29),
    ] {
        let got = enumerate_maximal(grid(dims, t), 20)?.len();
        check(&mut bad, got == want, format!("{dims:?} t={t}: {got} != {want}"));
    }
    Ok(bad)
}

fn generator_counts() -> Outcome {
    let mut bad = Vec::new();
    let g = grid(&[2, 2, 2], 3);
    let i3 = build_i(&g, 3);
    let it3 = build_itilde(&g, 3);
    let l = lattice_basis_ideal(&g, 3);
    let ord = MonomialOrder::degrevlex(8);
    check(&mut bad, minimal_generator_count(&i3)? == 6, "I<3> minimal generators");
    check(&mut bad, it3.gens().len() == 12, "distinct generators of the Segre ideal");
    check(&mut bad, minimal_generator_count(&it3)? == 9, "Segre ideal minimal generators");
    check(&mut bad, l.gens().len() == 4, "lattice basis generators");
    check(&mut bad, ideal_contains(&i3, &l, &ord, B)?, "lattice ideal inside I<3>");
    let outside = first_outside(&l, &i3, &ord, B)?;
    let strict = outside.as_ref().is_some_and(|f| !l.gb(B).unwrap().reduce(f).is_zero() && i3.gens().contains(f));
    check(&mut bad, strict, "a generator of I<3> with nonzero normal form modulo the lattice ideal");
    Ok(bad)
}

fn saturation_identities() -> Outcome {
    let mut bad = Vec::new();
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        check(&mut bad, verify_saturation_identity(&g, t, B)?, format!("global saturation t={t}"));
        for s in switchable_sets(&g, t)? {
            let r = verify_local_saturation(&s, B)?;
            check(&mut bad, r.quotient_equal, format!("t={t} single quotient {s:?}"));
            check(&mut bad, r.saturation_equal, format!("t={t} saturation {s:?}"));
        }
    }
    Ok(bad)
}

fn leading_ideal(polys: &[Polynomial], ord: &MonomialOrder) -> Vec<Monomial> {
    let mut ms: Vec<Monomial> = polys.iter().filter_map(|p| p.leading_monomial(ord)).collect();
    ms.sort();
    ms.dedup();
    ms.iter().filter(|m| !ms.iter().any(|o| o != *m && o.divides(m))).cloned().collect()
}

fn groebner_bases() -> Outcome {
    let mut bad = Vec::new();
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        let orders = [
            make_t_diagonal_order(DiagonalOrderSpec::lex(&g, t), &g, t)?,
            make_t_diagonal_order(DiagonalOrderSpec::revlex(&g, t), &g, t)?,
        ];
        for s in switchable_sets(&g, t)? {
            let gens = theorem_gb(&s)?;
            for d in &orders {
                check(
                    &mut bad,
                    is_groebner_basis(&gens, &d.order).is_groebner,
                    format!("t={t} {:?} {s:?}", d.spec.variant),
                );
                let reduced = build_itilde_s(&s).groebner(&d.order, B)?;
                check(
                    &mut bad,
                    leading_ideal(&gens, &d.order) == leading_ideal(reduced.polys(), &d.order),
                    format!("leading terms t={t} {:?} {s:?}", d.spec.variant),
                );
            }
        }
    }
    Ok(bad)
}

fn quotient_components() -> Outcome {
    let mut bad = Vec::new();
    let g = grid(&[2, 2, 2], 3);
    let i = build_i(&g, 3);
    let ord = MonomialOrder::degrevlex(8);
    for s in enumerate_maximal(g.clone(), 20)? {
        let desc = PrimeDescriptor::new(s.clone())?;
        let p = build_ps(&desc);
        for variant in [RhoVariant::Full, RhoVariant::Reduced] {
            let q = iterated_quotient(&i, &rho_s_factors(&s, variant)?, B)?;
            check(&mut bad, ideals_equal(&q, &p, &ord, B)?, format!("{variant:?} {s:?}"));
            let single = ideal_quotient(&i, &rho_s(&s, variant)?, B)?;
            check(&mut bad, ideals_equal(&single, &p, &ord, B)?, format!("single product {variant:?} {s:?}"));
        }
    }
    check(&mut bad, verify_corner_quotient(&g, B)?, "quotient by x_(1,1,1) x_(1,1,2)");
    Ok(bad)
}

fn non_radical_witnesses() -> Outcome {
    let mut bad = Vec::new();
    for (dims, t) in [(&[2, 2, 4][..], 2), (&[2, 2, 2, 2][..], 3)] {
        let g = grid(dims, t);
        let primes = minimal_primes(g.clone(), 20)?;
        match radical_witness_search(&g, t, &primes, 4, B)? {
            None => {
                check(&mut bad, false, format!("{dims:?} t={t}: no witness up to degree 4"));
            }
            Some(w) => {
                for p in &primes {
                    check(&mut bad, member_ps(&w.polynomial, p)?, format!("{dims:?} t={t}: witness outside a prime"));
                }
                let nf = build_i(&g, t).gb(B)?.reduce(&w.polynomial);
                check(&mut bad, !nf.is_zero(), format!("{dims:?} t={t}: witness lies in I"));
            }
        }
    }
    Ok(bad)
}

fn radicality_sanity() -> Outcome {
    let mut bad = Vec::new();
    let g = grid(&[2, 2, 2], 1);
    let primes = minimal_primes(g.clone(), 20)?;
    check(&mut bad, verify_radical_by_intersection(&g, 1, &primes, B)?, "intersection of minimal primes");
    check(&mut bad, radical_witness_search(&g, 1, &primes, 4, B)?.is_none(), "a witness exists");
    Ok(bad)
}

fn switchable_properties(bad: &mut Vec<String>) -> Result<()> {
    for dims in [vec![2, 2, 2], vec![2, 2, 3]] {
        let n = dims.len();
        for t in 1..=n {
            let g = grid(&dims, t);
            for s in switchable_sets(&g, t)? {
                let mask = s.mask();
                for a in bits(mask) {
                    for b in 0..g.size() {
                        for l in ComponentSet::full(t).subsets() {
                            if l.iter().all(|i| s.contains_id(g.switch1(i, a, b))) {
                                check(bad, s.contains_id(g.switch(l, a, b)), format!("bootstrapping {dims:?} t={t}"));
                            }
                        }
                        if s.contains_id(b) && g.distance(a, b) == 2 {
                            for i in (1..=t).filter(|&i| g.entry(a, i) != g.entry(b, i)) {
                                for c in [b, g.switch1(i, a, b), g.switch1(i, b, a)] {
                                    check(
                                        bad,
                                        s.contains_id(c) && s.connected(a, c),
                                        format!("distance-two class {dims:?} t={t}"),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for dims in [vec![2, 2, 2], vec![2, 2, 4], vec![2, 2, 2, 2]] {
        let n = dims.len();
        for t in 1..=n {
            let g = grid(&dims, t);
            check(bad, !is_maximal(&SwitchableSet::with_t(g.clone(), t, 0)?)?.maximal, "empty set maximal");
            for s in enumerate_maximal(g.clone(), 20)? {
                for a in bits(g.full_mask() & !s.mask()) {
                    check(
                        bad,
                        !is_switchable(&g, t, s.mask() | 1 << a),
                        format!("{dims:?} t={t}: extendable maximal set"),
                    );
                }
                for (i, &r) in dims.iter().enumerate() {
                    check(bad, (1..=r).all(|u| s.cells().iter().any(|b| b.at(i + 1) == u)), "value coverage");
                }
                if t == n {
                    let bd = block_decomposition(&s)?;
                    let k = bd.classes.len();
                    for x in 0..k {
                        if k >= 2 {
                            let partner = (0..k).any(|y| y != x && class_distance(&bd.classes[x], &bd.classes[y]) == 3);
                            check(bad, partner, format!("{dims:?}: class without a partner at distance 3"));
                        }
                    }
                }
            }
        }
    }
    let g = grid(&[2, 2, 3, 3], 1);
    let mut cells = Vec::new();
    for (b1, b2, b3, b4) in [
        (&[1, 2][..], &[1][..], &[1][..], &[1, 2][..]),
        (&[1, 2][..], &[1][..], &[1, 2][..], &[2][..]),
        (&[1, 2][..], &[1, 2][..], &[2][..], &[2, 3][..]),
        (&[1, 2][..], &[2][..], &[2, 3][..], &[2, 3][..]),
    ] {
        for &a in b1 {
            for &b in b2 {
                for &c in b3 {
                    for &d in b4 {
                        cells.push(IndexTuple::from([a, b, c, d]));
                    }
                }
            }
        }
    }
    cells.sort();
    cells.dedup();
    let s = SwitchableSet::from_cells(g.clone(), &cells)?;
    check(bad, s.is_switchable() && s.classes().len() == 1, "non-block example is a single 1-switchable class");
    check(bad, !is_maximal(&s)?.maximal, "non-block example is maximal");
    let (a, b) = (IndexTuple::from([1, 1, 1, 1]), IndexTuple::from([2, 2, 3, 3]));
    check(bad, !s.contains(&hyperci::indexcomb::switch(ComponentSet::single(2), &a, &b)?), "switch outside [t] stays");
    for x in bits(s.mask()) {
        for y in bits(s.mask()) {
            let path = [g.cell(x).clone(), g.cell(y).clone()];
            if g.distance(x, y) <= 1 {
                check(bad, verify_lemma_connected(&s, &path, ComponentSet::single(1), 0, 1)?, "connected switch");
            }
        }
    }
    Ok(())
}

fn identity_suites() -> Outcome {
    let mut bad = Vec::new();
    for (dims, t) in
        [(&[2, 2, 2][..], 1), (&[2, 2, 2][..], 2), (&[2, 2, 2][..], 3), (&[2, 2, 4][..], 3), (&[2, 2, 2, 2][..], 3)]
    {
        for r in identity_suite(&grid(dims, t), t, B)? {
            check(
                &mut bad,
                r.failures == 0,
                format!("{dims:?} t={t} {}: {} of {} failed", r.name, r.failures, r.cases),
            );
        }
    }
    switchable_properties(&mut bad)?;
    Ok(bad)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 minimal-prime counts", minimal_prime_counts),
        ("2 generator counts", generator_counts),
        ("3 saturation identities", saturation_identities),
        ("4 explicit Groebner bases", groebner_bases),
        ("5 quotients by rho_S", quotient_components),
        ("6 non-radicality witnesses", non_radical_witnesses),
        ("7 radicality of I<1> on 2x2x2", radicality_sanity),
        ("8 identity suites", identity_suites),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(bad) if bad.is_empty() => println!("PASS  {name}  ({ms} ms)"),
            Ok(bad) => {
                failed += 1;
                println!("FAIL  {name}  ({ms} ms): {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; "));
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}  ({ms} ms): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

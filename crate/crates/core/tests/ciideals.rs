use std::sync::Arc;

use hyperci::ciideals::*;
use hyperci::indexcomb::{CellGrid, Shape};
use hyperci::polyengine::ideal::iterated_quotient;
use hyperci::polyengine::{
    ideal_contains, ideal_quotient, ideals_equal, is_groebner_basis, saturate, Ideal, Monomial, MonomialOrder,
    Polynomial, DEFAULT_PAIR_BUDGET as B,
};
use hyperci::switchable::{enumerate_maximal, enumerate_switchable, SwitchableSet};

fn grid(dims: &[usize], t: usize) -> Arc<CellGrid> {
    Arc::new(CellGrid::new(&Shape::new(dims.to_vec(), t).unwrap()).unwrap())
}

fn minimal_monomials(mut ms: Vec<Monomial>) -> Vec<Monomial> {
    ms.sort();
    ms.dedup();
    let keep: Vec<Monomial> = ms.iter().filter(|m| !ms.iter().any(|o| o != *m && o.divides(m))).cloned().collect();
    keep
}

fn leading_ideal(polys: &[Polynomial], ord: &MonomialOrder) -> Vec<Monomial> {
    minimal_monomials(polys.iter().filter_map(|p| p.leading_monomial(ord)).collect())
}

#[test]
fn theorem_gb_is_groebner_for_every_switchable_set() {
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        let orders = [
            make_t_diagonal_order(DiagonalOrderSpec::lex(&g, t), &g, t).unwrap(),
            make_t_diagonal_order(DiagonalOrderSpec::revlex(&g, t), &g, t).unwrap(),
        ];
        for m in enumerate_switchable(&g, t, 20).unwrap() {
            let s = SwitchableSet::with_t(g.clone(), t, m).unwrap();
            let gens = theorem_gb(&s).unwrap();
            let ideal = build_itilde_s(&s);
            for d in &orders {
                let check = is_groebner_basis(&gens, &d.order);
                assert!(check.is_groebner, "t={t} S={s:?} {:?}: {check:?}", d.spec);
                let reduced = ideal.groebner(&d.order, B).unwrap();
                assert_eq!(leading_ideal(&gens, &d.order), leading_ideal(reduced.polys(), &d.order));
            }
            if t >= 2 {
                let small = theorem_gb_reduced(&s).unwrap();
                for d in &orders {
                    assert!(is_groebner_basis(&small, &d.order).is_groebner);
                }
            }
        }
    }
}

#[test]
fn theorem_gb_generates_segre_part() {
    let g = grid(&[2, 2, 2], 2);
    let ord = MonomialOrder::degrevlex(8);
    for m in enumerate_switchable(&g, 2, 20).unwrap() {
        let s = SwitchableSet::with_t(g.clone(), 2, m).unwrap();
        let gb = Ideal::new(8, theorem_gb(&s).unwrap()).unwrap();
        let it = build_itilde_s(&s);
        assert!(ideal_contains(&gb, &it, &ord, B).unwrap());
        assert!(ideal_contains(&it, &gb, &ord, B).unwrap());
        if s.classes().iter().all(|c| c.count_ones() == 1) {
            assert!(gb.gens().is_empty());
        }
    }
}

#[test]
fn leading_terms_follow_orientation() {
    let g = grid(&[2, 2, 2], 3);
    let lex = make_t_diagonal_order(DiagonalOrderSpec::lex(&g, 3), &g, 3).unwrap();
    for f in all_minors(&g, 3) {
        // in lex every minor has the cell-order-smallest variable in its leading term
        let lead = f.leading_monomial(&lex.order).unwrap();
        let min_var = f.support_mask().trailing_zeros() as usize;
        assert!(lead.exp(min_var) > 0);
    }
}

#[test]
fn saturation_of_slice_ideal() {
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        let i = build_i(&g, t);
        let prod = Polynomial::monomial(Monomial::from_vars(8, &(0..8).collect::<Vec<_>>()));
        let sat = saturate(&i, &prod, B).unwrap();
        assert!(ideals_equal(&sat, &build_itilde(&g, t), &MonomialOrder::degrevlex(8), B).unwrap());
    }
}

#[test]
fn containments_between_global_ideals() {
    let g = grid(&[2, 2, 2], 3);
    let ord = MonomialOrder::degrevlex(8);
    let i = build_i(&g, 3);
    let it = build_itilde(&g, 3);
    assert!(ideal_contains(&it, &i, &ord, B).unwrap());
    assert!(!ideal_contains(&i, &it, &ord, B).unwrap());
    let l = lattice_basis_ideal(&g, 3);
    let prod = Polynomial::monomial(Monomial::from_vars(8, &(0..8).collect::<Vec<_>>()));
    let sat = saturate(&l, &prod, B).unwrap();
    assert!(ideals_equal(&sat, &it, &ord, B).unwrap());
}

#[test]
fn slice_ideal_lies_in_every_prime() {
    let ord = MonomialOrder::degrevlex(8);
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        let i = build_i(&g, t);
        for m in enumerate_switchable(&g, t, 20).unwrap() {
            let s = SwitchableSet::with_t(g.clone(), t, m).unwrap();
            let p = build_ps(&PrimeDescriptor::new(s).unwrap());
            assert!(ideal_contains(&p, &i, &ord, B).unwrap());
        }
    }
}

#[test]
fn segre_ideals_have_binomial_bases() {
    let g = grid(&[2, 2, 2], 2);
    for m in enumerate_switchable(&g, 2, 20).unwrap() {
        let s = SwitchableSet::with_t(g.clone(), 2, m).unwrap();
        let gb = build_itilde_s(&s).gb(B).unwrap();
        assert!(gb.polys().iter().all(|p| p.is_pure_binomial()));
    }
}

#[test]
fn x_s_multiplies_segre_generators_into_slice_ideal() {
    for t in 1..=3 {
        let g = grid(&[2, 2, 2], t);
        let gb = build_i(&g, t).gb(B).unwrap();
        for s in enumerate_maximal(g.clone(), 20).unwrap() {
            let xs = x_s(&s);
            for f in itilde_s_generators(&s) {
                assert!(gb.contains(&xs.mul(&f)));
            }
        }
    }
}

#[test]
fn signature_oracle_matches_normal_forms() {
    let g = grid(&[2, 2, 2], 3);
    let n = SwitchableSet::full(g.clone());
    let lex = make_t_diagonal_order(DiagonalOrderSpec::lex(&g, 3), &g, 3).unwrap();
    let gens = theorem_gb(&n).unwrap();
    let gb = Ideal::new(8, gens.clone()).unwrap();
    let red = gb.groebner(&lex.order, B).unwrap();
    for d in 1..=3u32 {
        let monos = monomials_of_degree(8, d);
        for (k, u) in monos.iter().enumerate() {
            for v in &monos[k + 1..] {
                let f = Polynomial::binomial(u.clone(), v.clone());
                let sig = marginal_signature_member(&f, &n).unwrap();
                let nf = hyperci::polyengine::normal_form(&f, &gens, &lex.order).is_zero();
                assert_eq!(sig, nf, "{f:?}");
                assert_eq!(sig, red.contains(&f));
            }
        }
    }
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(k: usize, left: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if k + 1 == exps.len() {
            exps[k] = left as u16;
            out.push(Monomial::from_exponents(exps));
            exps[k] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[k] = e as u16;
            rec(k + 1, left - e, exps, out);
        }
        exps[k] = 0;
    }
    rec(0, d, &mut exps, &mut out);
    out
}

#[test]
fn quotient_by_rho_gives_prime() {
    let g = grid(&[2, 2, 2], 3);
    let i = build_i(&g, 3);
    let ord = MonomialOrder::degrevlex(8);
    let maximal = enumerate_maximal(g.clone(), 20).unwrap();
    assert_eq!(maximal.len(), 5);
    for s in maximal {
        let p = build_ps(&PrimeDescriptor::new(s.clone()).unwrap());
        for v in [RhoVariant::Full, RhoVariant::Reduced] {
            let factors = rho_s_factors(&s, v).unwrap();
            let q = iterated_quotient(&i, &factors, B).unwrap();
            assert!(ideals_equal(&q, &p, &ord, B).unwrap(), "{s:?} {v:?}");
        }
    }
    let corner: Vec<usize> = (0..2).collect();
    let q = ideal_quotient(&i, &Polynomial::monomial(Monomial::from_vars(8, &corner)), B).unwrap();
    assert!(ideals_equal(&q, &build_itilde(&g, 3), &ord, B).unwrap());
}

#[test]
fn path_products_reduce() {
    let g = grid(&[2, 2, 2], 3);
    let gb = build_i(&g, 3).gb(B).unwrap();
    let mut checked = 0;
    for a0 in g.cells() {
        for a1 in g.cells() {
            for b in g.cells() {
                for i in 1..=3 {
                    let path = [a0.clone(), a1.clone()];
                    if let Ok(v) = verify_path_product(&g, &path, b, i, 3, &gb) {
                        assert!(v);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn switch_difference_identity_exhaustive() {
    let g = grid(&[2, 2, 2], 3);
    let mut minus_fails = 0;
    for a in g.cells() {
        for b in g.cells() {
            for c in g.cells() {
                for i in 1..=3 {
                    if a.at(i) == c.at(i) {
                        assert!(verify_switch_difference_identity(&g, a, b, c, i).unwrap());
                        let (lhs, first, second) = switch_difference_terms(&g, a, b, c, i).unwrap();
                        if second.is_zero() {
                            assert_eq!(lhs, first.sub(&second));
                        } else {
                            minus_fails += 1;
                            assert_ne!(lhs, first.sub(&second));
                        }
                    } else {
                        assert!(verify_switch_difference_identity(&g, a, b, c, i).is_err());
                    }
                }
            }
        }
    }
    assert!(minus_fails > 0);
}

#[test]
fn distance_three_products_sampled_on_larger_shape() {
    let g = grid(&[2, 2, 4], 3);
    let gb = build_i(&g, 3).gb(B).unwrap();
    let cells = g.cells();
    let mut checked = 0;
    for (ka, a) in cells.iter().enumerate().step_by(3) {
        for b in cells {
            for c in cells.iter().skip(ka % 2).step_by(2) {
                for i in 1..=3 {
                    for j in 1..=3 {
                        if let Ok(v) = distance_three_product_membership(&g, a, b, c, i, j, 3, &gb) {
                            assert!(v);
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

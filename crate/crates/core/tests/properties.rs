use std::sync::Arc;

use msalg::algebra::{convolve, GroupAlgebra};
use msalg::criteria::{central_subset_check, zero_sum_condition};
use msalg::gfq::{is_irreducible, make_field, poly_factor, task_rng, FqElem, FqField, Poly};
use msalg::groups::{build_builtin, FiniteGroup};
use msalg::oracle::{naive_zero_sum, scan_all_idempotents, verify_singular_class_sums, ScanBudget};
use msalg::structure::block_idempotents;
use proptest::prelude::*;

fn field(p: u64, k: usize) -> FqField {
    make_field(p, k).unwrap()
}

fn small_field() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![
        Just((2u64, 1usize)),
        Just((2, 3)),
        Just((2, 8)),
        Just((3, 1)),
        Just((3, 4)),
        Just((5, 2)),
        Just((7, 3)),
        Just((1021, 2)),
    ]
}

fn small_group() -> impl Strategy<Value = (&'static str, u64)> {
    prop_oneof![
        Just(("cyclic", 5u64)),
        Just(("symmetric", 3)),
        Just(("dihedral", 4)),
        Just(("quaternion", 8)),
        Just(("alternating", 4)),
    ]
}

fn elems(f: &FqField, seed: u64, n: usize) -> Vec<FqElem> {
    let mut rng = task_rng(seed, 0);
    (0..n).map(|_| f.random(&mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, k) in small_field(), seed in any::<u64>()) {
        let f = field(p, k);
        let v = elems(&f, seed, 3);
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), f.one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn frobenius_is_automorphism((p, k) in small_field(), seed in any::<u64>()) {
        let f = field(p, k);
        let v = elems(&f, seed, 2);
        let (a, b) = (v[0], v[1]);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(a), f.pow(a, p));
        let mut x = a;
        for _ in 0..k {
            x = f.frobenius(x);
        }
        prop_assert_eq!(x, a);
        prop_assert_eq!(f.frobenius(f.pth_root(a)), a);
    }

    #[test]
    fn factorization_multiplies_back((p, k) in prop_oneof![Just((2u64, 1usize)), Just((2, 2)), Just((3, 1)), Just((3, 2)), Just((5, 1)), Just((7, 1))],
                                     deg in 1usize..10, seed in any::<u64>()) {
        let f = field(p, k);
        let mut c = elems(&f, seed, deg + 1);
        if c[deg].is_zero() {
            c[deg] = f.one();
        }
        let poly = Poly::new(c);
        let fac = poly_factor(&poly, &f, &mut task_rng(seed, 1));
        prop_assert_eq!(fac.expand(&f), poly);
        for (q, m) in &fac.factors {
            prop_assert!(*m >= 1);
            prop_assert!(q.is_monic(&f));
            prop_assert!(is_irreducible(q, &f));
        }
    }

    #[test]
    fn convolution_is_associative((name, n) in small_group(), (p, k) in small_field(), seed in any::<u64>()) {
        let g = build_builtin(name, &[n]).unwrap();
        let f = field(p, k);
        let m = g.order();
        let v = elems(&f, seed, 3 * m);
        let (a, b, c) = (&v[..m], &v[m..2 * m], &v[2 * m..]);
        let ab_c = convolve(&g, &f, &convolve(&g, &f, a, b), c);
        let a_bc = convolve(&g, &f, a, &convolve(&g, &f, b, c));
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn trace_is_symmetric((name, n) in small_group(), (p, k) in small_field(), seed in any::<u64>()) {
        let alg = GroupAlgebra::new(Arc::new(build_builtin(name, &[n]).unwrap()), Arc::new(field(p, k)));
        let m = alg.dim();
        let v = elems(alg.field(), seed, 2 * m);
        let a = alg.element(v[..m].to_vec()).unwrap();
        let b = alg.element(v[m..].to_vec()).unwrap();
        prop_assert_eq!(a.mul(&b).unwrap().trace(), b.mul(&a).unwrap().trace());
    }

    #[test]
    fn zero_sum_dp_matches_naive(degrees in prop::collection::vec(1usize..7, 0..6), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let (fast, w_fast) = zero_sum_condition(&degrees, p);
        let (slow, w_slow) = naive_zero_sum(&degrees, p).unwrap();
        prop_assert_eq!(fast, slow);
        for w in [w_fast, w_slow].into_iter().flatten() {
            prop_assert!(w.iter().zip(&degrees).all(|(&c, &n)| c <= n as u64));
            prop_assert!(w.iter().any(|&c| c > 0));
            let s: u64 = w.iter().zip(&degrees).map(|(&c, &n)| c * n as u64).sum();
            prop_assert_eq!(s % p, 0);
        }
    }

    #[test]
    fn subset_check_matches_brute_force(res in prop::collection::vec(0u32..13, 0..12), p in prop::sample::select(vec![2u64, 3, 5, 7, 13])) {
        let res: Vec<u32> = res.into_iter().map(|r| r % p as u32).collect();
        let brute = (1u32..1 << res.len()).any(|m| {
            (0..res.len()).filter(|i| m >> i & 1 == 1).map(|i| res[i] as u64).sum::<u64>() % p == 0
        });
        let (holds, w) = central_subset_check(&res, p);
        prop_assert_eq!(holds, !brute);
        if let Some(w) = w {
            prop_assert!(!w.is_empty());
            prop_assert_eq!(w.iter().map(|&i| res[i] as u64).sum::<u64>() % p, 0);
        }
    }

    /// Partial sums of at least p orthogonal idempotents repeat a trace
    /// residue, so some contiguous run has trace zero.
    #[test]
    fn orthogonal_family_has_zero_trace_run(n in 6u64..20, p in prop::sample::select(vec![2u64, 3, 5])) {
        let g: Arc<FiniteGroup> = Arc::new(build_builtin("cyclic", &[n]).unwrap());
        prop_assume!(n % p != 0);
        let alg = GroupAlgebra::over_splitting_field(g, p).unwrap();
        let blocks = block_idempotents(&alg, &mut task_rng(7, n)).unwrap();
        prop_assume!(blocks.count() as u64 >= p);
        let f = alg.field();
        let mut partial = vec![f.zero()];
        for e in blocks.idempotents.iter().take(p as usize) {
            partial.push(f.add(*partial.last().unwrap(), e.trace()));
        }
        let mut found = false;
        for i in 0..partial.len() {
            for j in i + 1..partial.len() {
                if partial[i] == partial[j] {
                    let run = blocks.idempotents[i..j].iter().fold(alg.zero(), |acc, e| acc.add(e));
                    prop_assert!(run.is_idempotent() && run.trace().is_zero() && !run.is_zero());
                    found = true;
                }
            }
        }
        prop_assert!(found);
    }
}

#[test]
fn scan_closed_under_complement() {
    let budget = ScanBudget::default();
    for (name, n, p, k) in [("cyclic", 6u64, 2u64, 2usize), ("symmetric", 3, 2, 1), ("dihedral", 4, 3, 1), ("cyclic", 4, 5, 1)] {
        let alg = GroupAlgebra::new(Arc::new(build_builtin(name, &[n]).unwrap()), Arc::new(field(p, k)));
        let all = scan_all_idempotents(&alg, &budget).unwrap();
        let f = alg.field();
        for r in &all {
            let c = alg.one().sub(&r.element);
            let partner = all.iter().find(|s| s.element == c).expect("1 - e is listed");
            assert_eq!(partner.trace, f.sub(f.one(), r.trace));
            if (alg.group().order() as u64).is_multiple_of(p) {
                assert!(verify_singular_class_sums(&r.element, p).unwrap());
            }
        }
    }
}

use mvglue_core::exactalg::{preimage_solve, smith_normal_form, AbHom, FgAbGroup, Int, IntMatrix};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(move |(r, c)| (Just(r), Just(c), proptest::collection::vec(-bound..=bound, r * c)))
}

fn to_int(r: usize, c: usize, data: &[i64]) -> IntMatrix {
    IntMatrix::new(r, c, data.iter().map(|&x| Int::from(x)).collect())
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| [&row[..j], &row[j + 1..]].concat()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i128(b, a % b)
    }
}

/// Determinantal divisors: `g_k` is the gcd of all `k × k` minors.
fn determinantal_divisors(r: usize, c: usize, data: &[i64]) -> Vec<i128> {
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let minor: Vec<Vec<i128>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| data[i * c + j] as i128).collect()).collect();
                    g = gcd_i128(g, det_i128(&minor));
                }
            }
            g
        })
        .collect()
}

proptest! {
    #[test]
    fn smith_form_invariants((r, c, data) in matrix(6, 6, 9)) {
        let m = to_int(r, c, &data);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(r));
        prop_assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(c));
        let d = snf.nonzero_diagonal();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(snf.diagonal[snf.rank..].iter().all(Zero::is_zero));
    }

    #[test]
    fn smith_diagonal_matches_minors((r, c, data) in matrix(4, 4, 5)) {
        let snf = smith_normal_form(&to_int(r, c, &data));
        let g = determinantal_divisors(r, c, &data);
        let mut prev = 1i128;
        for (k, gk) in g.iter().enumerate() {
            let expected = if *gk == 0 { 0 } else { gk / prev };
            prop_assert_eq!(snf.diagonal[k].clone(), Int::from(expected));
            if *gk != 0 {
                prev = *gk;
            }
        }
    }

    #[test]
    fn snf_solve_recovers_consistent_systems((r, c, data) in matrix(6, 6, 6), x in proptest::collection::vec(-7i64..=7, 6)) {
        let m = to_int(r, c, &data);
        let x: Vec<Int> = x[..c].iter().map(|&v| Int::from(v)).collect();
        let b = m.mul_vec(&x);
        let y = smith_normal_form(&m).solve(&b).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
        let k = smith_normal_form(&m).kernel_basis();
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn preimage_solve_finds_preimages(
        (r, c, data) in matrix(4, 4, 4),
        rel in proptest::collection::vec(0i64..=4, 4),
        x in proptest::collection::vec(-6i64..=6, 4),
    ) {
        // domain Z^c, codomain Z^r modulo a diagonal relation matrix
        let rel_m = IntMatrix::from_fn(r, r, |i, j| if i == j { Int::from(rel[i]) } else { Int::zero() });
        let codomain = FgAbGroup::new(rel_m);
        let domain = FgAbGroup::free(c);
        let f = AbHom::new(domain, codomain.clone(), to_int(r, c, &data)).unwrap();
        let x: Vec<Int> = x[..c].iter().map(|&v| Int::from(v)).collect();
        let y = f.apply(&x);
        let p = preimage_solve(&f, &y).expect("image element has a preimage");
        prop_assert!(codomain.is_zero(&codomain.sub(&f.apply(&p), &y)));
    }

    #[test]
    fn finite_group_order_matches_enumeration(n in 1usize..=3, diag in proptest::collection::vec(1i64..=5, 3), off in proptest::collection::vec(-3i64..=3, 9)) {
        // an upper triangular relation matrix with positive diagonal is nonsingular
        let m = IntMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => Int::from(diag[i]),
            std::cmp::Ordering::Less => Int::from(off[i * 3 + j]),
            std::cmp::Ordering::Greater => Int::zero(),
        });
        let expected: i64 = diag[..n].iter().product();
        let g = FgAbGroup::new(m);
        prop_assert_eq!(g.order(), Some(Int::from(expected)));
        let elems = g.enumerate().unwrap();
        prop_assert_eq!(elems.len() as i64, expected);
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), elems.len());
        prop_assert!(elems.iter().all(|e| g.reduce(e.clone()) == *e));
    }
}

#[test]
fn cyclic_orders() {
    assert_eq!(FgAbGroup::cyclic(6).order(), Some(Int::from(6)));
    assert_eq!(FgAbGroup::free(1).order(), None);
    assert!(FgAbGroup::new(IntMatrix::from_i64(&[&[1]])).is_trivial());
    assert_eq!(FgAbGroup::from_invariants(&[Int::from(2), Int::from(4)], 0).torsion_order(), Int::from(8));
}

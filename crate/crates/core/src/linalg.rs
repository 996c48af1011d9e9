//! Dense exact linear algebra over ℚ(i), and determinants of small
//! polynomial matrices.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::context::VarContext;
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;

pub type Row = Vec<GaussianRational>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Row]) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Row]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : m·x = 0}` for a matrix with `ncols` columns.
pub fn kernel(m: &[Row], ncols: usize) -> Vec<Row> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); ncols];
            v[f] = GaussianRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[r][f].clone();
            }
            v
        })
        .collect()
}

/// `m·v`.
pub fn apply(m: &[Row], v: &[GaussianRational]) -> Row {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(GaussianRational::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(a: &[Row], b: &[Row]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    ra == rb && rank(&both) == ra
}

/// Determinant of a square polynomial matrix by Laplace expansion with
/// memoization over column subsets (no division needed).
pub fn det_poly(ctx: &Arc<VarContext>, m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    if k == 0 {
        return Polynomial::one(ctx);
    }
    assert!(k <= 20, "determinant too large");
    let mut memo: HashMap<u32, Polynomial> = HashMap::new();
    minor_rec(ctx, m, 0, 0, &mut memo)
}

fn minor_rec(
    ctx: &Arc<VarContext>,
    m: &[Vec<Polynomial>],
    row: usize,
    used: u32,
    memo: &mut HashMap<u32, Polynomial>,
) -> Polynomial {
    let k = m.len();
    if row == k {
        return Polynomial::one(ctx);
    }
    if let Some(p) = memo.get(&used) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(ctx);
    let mut sign_pos = true;
    for c in 0..k {
        if used & (1 << c) != 0 {
            continue;
        }
        if !m[row][c].is_zero() {
            let sub = minor_rec(ctx, m, row + 1, used | (1 << c), memo);
            if !sub.is_zero() {
                let t = &m[row][c] * &sub;
                acc = if sign_pos { &acc + &t } else { &acc - &t };
            }
        }
        sign_pos = !sign_pos;
    }
    memo.insert(used, acc.clone());
    acc
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn g(re: i64) -> GaussianRational {
        GaussianRational::from(re)
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![g(0), g(1), g(-1), g(0)], vec![g(0), g(0), g(0), g(1)]];
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn complex_rank() {
        let i = GaussianRational::i();
        let m = vec![vec![g(1), i.clone()], vec![i.clone(), g(-1)]];
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn laplace_determinant() {
        let ctx = VarContext::z_only(3);
        let p = |s: &str| parse_poly(s, &ctx).unwrap();
        let m = vec![
            vec![p("z1"), p("z2"), p("0")],
            vec![p("1"), p("z3"), p("z1")],
            vec![p("0"), p("2"), p("z2")],
        ];
        // z1(z3 z2 - 2 z1) - z2(z2) = z1 z2 z3 - 2 z1^2 - z2^2
        assert_eq!(det_poly(&ctx, &m), p("z1*z2*z3 - 2*z1^2 - z2^2"));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::nullspace;
use crate::ring::{Poly, Rat};

/// Smallest positive integer weight vector (searched over small combinations)
/// for which every input polynomial is weighted-homogeneous.
///
/// Returns `None` when no such vector is found. The all-ones vector is tried
/// first, so standard-graded input always returns it.
pub fn find_positive_grading(polys: &[Poly]) -> Option<Vec<u32>> {
    let n = polys.first()?.ctx().nvars();
    if polys.iter().all(|p| p.is_homogeneous(&vec![1; n])) {
        return Some(vec![1; n]);
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for p in polys {
        let ts = p.terms();
        for t in ts.iter().skip(1) {
            rows.push(
                ts[0]
                    .0
                    .exps()
                    .iter()
                    .zip(t.0.exps())
                    .map(|(&a, &b)| Rat::from_integer(BigInt::from(a as i64 - b as i64)))
                    .collect(),
            );
        }
    }
    let basis = nullspace(&rows, n);
    if basis.is_empty() {
        return None;
    }
    let k = basis.len();
    let hi: i64 = if k <= 4 { 4 } else if k <= 7 { 2 } else { 1 };
    let mut best: Option<Vec<u32>> = None;
    let mut coeffs = vec![1i64; k];
    loop {
        let mut v = vec![Rat::zero(); n];
        for (c, b) in coeffs.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += y * Rat::from_integer(BigInt::from(*c));
            }
        }
        if v.iter().all(|x| x.is_positive()) {
            let l = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
            let w: Option<Vec<u32>> = ints.iter().map(|x| (x / &g).to_u32()).collect();
            if let Some(w) = w {
                let better = match &best {
                    None => true,
                    Some(b) => w.iter().sum::<u32>() < b.iter().sum::<u32>(),
                };
                if better {
                    best = Some(w);
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return best;
            }
            if coeffs[pos] < hi {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = 1;
            pos += 1;
        }
    }
}

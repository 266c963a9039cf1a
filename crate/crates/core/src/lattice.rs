//! Rank-2 sublattices of `Z^2`, viewed as square-tiled tori.
//!
//! A sublattice of index `n` has a unique basis `(w, 0), (t, h)` with
//! `w * h = n` and `0 <= t < w`; the triple is the width, height and twist
//! of the single horizontal cylinder of the torus. The quotient `Z^2 / L`
//! is cyclic exactly when the content (the gcd of all generator
//! coordinates) is 1, which is also `gcd(w, h, t) = 1` and `d1 = 1` in the
//! Smith form. The three tests are computed independently here.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, gcd, ArithError};

/// Default cap on the number of triples `enumerate_lattices` will produce.
pub const DEFAULT_MAX_TRIPLES: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("generators {u:?} and {v:?} do not span a rank-2 sublattice")]
    Rank { u: [i64; 2], v: [i64; 2] },
    #[error("invalid cylinder parameters w={w}, h={h}, t={t}")]
    InvalidTriple { w: u64, h: u64, t: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("index {n} needs {needed} entries, above the cap of {cap}")]
    Budget { n: u64, needed: u64, cap: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Two integer vectors spanning a rank-2 sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorPair {
    u: [i64; 2],
    v: [i64; 2],
    index: u64,
}

fn det(u: [i64; 2], v: [i64; 2]) -> i128 {
    // each product is at most 2^126 in magnitude, the difference at most 2^127
    // which is the only value that can fail; saturate it, the index check rejects it
    (u[0] as i128 * v[1] as i128).saturating_sub(u[1] as i128 * v[0] as i128)
}

impl GeneratorPair {
    /// Fails with [`LatticeError::Rank`] if `u` and `v` are parallel (or zero).
    pub fn new(u: [i64; 2], v: [i64; 2]) -> Result<Self> {
        let d = det(u, v);
        if d == 0 {
            return Err(LatticeError::Rank { u, v });
        }
        let index = u64::try_from(d.unsigned_abs()).map_err(|_| LatticeError::Overflow("index"))?;
        Ok(GeneratorPair { u, v, index })
    }

    pub fn u(&self) -> [i64; 2] {
        self.u
    }

    pub fn v(&self) -> [i64; 2] {
        self.v
    }

    /// Whether `p` is an integer combination of `u` and `v`.
    pub fn contains(&self, p: [i64; 2]) -> bool {
        // Cramer: p = a u + b v with a = det(p, v) / det, b = det(u, p) / det
        let d = det(self.u, self.v);
        det(p, self.v) % d == 0 && det(self.u, p) % d == 0
    }

    /// Both pairs generate the same sublattice.
    pub fn same_lattice(&self, other: &GeneratorPair) -> bool {
        self.contains(other.u)
            && self.contains(other.v)
            && other.contains(self.u)
            && other.contains(self.v)
    }
}

impl fmt::Display for GeneratorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u=({}, {}), v=({}, {})",
            self.u[0], self.u[1], self.v[0], self.v[1]
        )
    }
}

/// The canonical basis `(w, 0), (t, h)` of a sublattice: width, height and
/// twist of its horizontal cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HnfLattice {
    w: u64,
    h: u64,
    t: u64,
}

impl HnfLattice {
    pub fn new(w: u64, h: u64, t: u64) -> Result<Self> {
        if w == 0 || h == 0 || t >= w {
            return Err(LatticeError::InvalidTriple { w, h, t });
        }
        w.checked_mul(h)
            .ok_or(LatticeError::Overflow("index"))?;
        Ok(HnfLattice { w, h, t })
    }

    pub fn w(&self) -> u64 {
        self.w
    }
    pub fn h(&self) -> u64 {
        self.h
    }
    pub fn t(&self) -> u64 {
        self.t
    }

    /// `w * h`.
    pub fn index(&self) -> u64 {
        self.w * self.h
    }

    /// The pair `(w, 0), (t, h)`.
    pub fn generators(&self) -> Result<GeneratorPair> {
        let conv = |x: u64| i64::try_from(x).map_err(|_| LatticeError::Overflow("generators"));
        GeneratorPair::new([conv(self.w)?, 0], [conv(self.t)?, conv(self.h)?])
    }
}

impl fmt::Display for HnfLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.w, self.h, self.t)
    }
}

/// Invariant factors `d1 | d2` of `Z^2 / L`, so `Z^2 / L = Z/d1 + Z/d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientShape {
    pub d1: u64,
    pub d2: u64,
}

impl QuotientShape {
    pub fn is_cyclic(&self) -> bool {
        self.d1 == 1
    }
}

/// `|det(u, v)|`, the number of squares.
pub fn lattice_index(g: &GeneratorPair) -> u64 {
    g.index
}

/// gcd of all four coordinates; independent of the chosen basis.
pub fn content(g: &GeneratorPair) -> u64 {
    [g.u[0], g.u[1], g.v[0], g.v[1]]
        .into_iter()
        .fold(0, |acc, x| gcd(acc, x.unsigned_abs()))
}

/// Content 1, equivalently a cyclic quotient.
pub fn is_primitive(g: &GeneratorPair) -> bool {
    content(g) == 1
}

/// Reduce to the unique basis `(w, 0), (t, h)` with `0 <= t < w`.
///
/// Euclid on the second coordinates (column operations, i.e. a change of
/// generators) until one generator is horizontal; then fix signs and bring
/// the twist into `[0, w)`.
pub fn hnf_reduce(g: &GeneratorPair) -> Result<HnfLattice> {
    let overflow = || LatticeError::Overflow("hnf_reduce");
    let mut a = [g.u[0] as i128, g.u[1] as i128];
    let mut b = [g.v[0] as i128, g.v[1] as i128];
    while b[1] != 0 {
        let q = a[1] / b[1];
        a = [
            q.checked_mul(b[0]).and_then(|x| a[0].checked_sub(x)).ok_or_else(overflow)?,
            a[1] - q * b[1],
        ];
        std::mem::swap(&mut a, &mut b);
    }
    // b is horizontal, a carries the height
    if a[1] < 0 {
        a = [-a[0], -a[1]];
    }
    let w = b[0].unsigned_abs();
    let t = a[0].rem_euclid(b[0].abs()) as u128;
    let h = a[1] as u128;
    let conv = |x: u128| u64::try_from(x).map_err(|_| overflow());
    HnfLattice::new(conv(w)?, conv(h)?, conv(t)?)
}

/// Smith form of the 2x2 matrix with columns `u`, `v`, by row and column
/// operations.
pub fn smith_shape(g: &GeneratorPair) -> Result<QuotientShape> {
    let overflow = || LatticeError::Overflow("smith_shape");
    // m[row][col]
    let mut m = [
        [g.u[0] as i128, g.v[0] as i128],
        [g.u[1] as i128, g.v[1] as i128],
    ];
    loop {
        // move the smallest nonzero entry to the corner
        let (r, c) = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].unsigned_abs())
            .expect("rank-2 matrix has a nonzero entry");
        m.swap(0, r);
        for row in m.iter_mut() {
            row.swap(0, c);
        }
        let pivot = m[0][0];

        let q = m[1][0] / pivot;
        let [top, bottom] = &mut m;
        for (b, &t) in bottom.iter_mut().zip(top.iter()) {
            *b = q.checked_mul(t).and_then(|x| b.checked_sub(x)).ok_or_else(overflow)?;
        }
        let q = m[0][1] / pivot;
        for row in m.iter_mut() {
            row[1] = q.checked_mul(row[0]).and_then(|x| row[1].checked_sub(x)).ok_or_else(overflow)?;
        }
        if m[1][0] != 0 || m[0][1] != 0 {
            continue;
        }
        if m[1][1] % pivot != 0 {
            // fold row 1 into row 0 and reduce again
            m[0][1] = m[1][1];
            continue;
        }
        let d1 = pivot.unsigned_abs();
        let d2 = m[1][1].unsigned_abs();
        let conv = |x: u128| u64::try_from(x).map_err(|_| overflow());
        return Ok(QuotientShape {
            d1: conv(d1)?,
            d2: conv(d2)?,
        });
    }
}

/// `gcd(w, h, t) = 1`.
pub fn is_cyclic(l: &HnfLattice) -> bool {
    gcd(gcd(l.w, l.h), l.t) == 1
}

/// Every index-`n` sublattice in HNF, ordered by `w` then `t`.
///
/// Yields exactly `sigma(n)` triples. Refuses `n` when `sigma(n)` exceeds
/// `max_triples`.
pub fn enumerate_lattices(n: u64, max_triples: u64) -> Result<Lattices> {
    let f = arith::factorize(n)?;
    let total = arith::sigma(&f)?;
    if total > max_triples {
        return Err(LatticeError::Budget {
            n,
            needed: total,
            cap: max_triples,
        });
    }
    Ok(Lattices {
        n,
        widths: arith::divisors(&f),
        pos: 0,
        t: 0,
        remaining: total,
    })
}

/// Lazy iterator returned by [`enumerate_lattices`].
#[derive(Debug, Clone)]
pub struct Lattices {
    n: u64,
    widths: Vec<u64>,
    pos: usize,
    t: u64,
    remaining: u64,
}

impl Iterator for Lattices {
    type Item = HnfLattice;

    fn next(&mut self) -> Option<HnfLattice> {
        let &w = self.widths.get(self.pos)?;
        let item = HnfLattice {
            w,
            h: self.n / w,
            t: self.t,
        };
        self.t += 1;
        if self.t == w {
            self.t = 0;
            self.pos += 1;
        }
        self.remaining -= 1;
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

impl ExactSizeIterator for Lattices {}

/// Origami encoding of a torus: where each unit square goes when stepping
/// right (`h`) and up (`v`). Square `(i, j)` has index `i + w * j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutationPair {
    pub n: usize,
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // apply a, then b
    a.iter().map(|&x| b[x]).collect()
}

impl PermutationPair {
    pub fn commute(&self) -> bool {
        compose(&self.h, &self.v) == compose(&self.v, &self.h)
    }

    /// Every square is reachable from square 0.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for y in [self.h[x], self.v[x]] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All elements of the group generated by `h` and `v`, by closure.
    pub fn group_elements(&self) -> Vec<Vec<usize>> {
        let identity: Vec<usize> = (0..self.n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
        let mut elements = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(g) = queue.pop_front() {
            for gen in [&self.h, &self.v] {
                let next = compose(&g, gen);
                if seen.insert(next.clone()) {
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        elements
    }

    /// Whether the generated group has an element whose order equals the
    /// group order.
    pub fn group_is_cyclic(&self) -> bool {
        let elements = self.group_elements();
        let order = elements.len();
        elements.iter().any(|g| element_order(g) == order)
    }
}

fn element_order(g: &[usize]) -> usize {
    // lcm of cycle lengths
    let mut seen = vec![false; g.len()];
    let mut order = 1usize;
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = g[x];
            len += 1;
        }
        order = order / gcd(order as u64, len as u64) as usize * len;
    }
    order
}

/// Build the horizontal and vertical square permutations of a torus.
///
/// Moving up from the top row lands `t` squares to the right on the
/// bottom row. Refuses `w * h > max_squares`.
pub fn to_permutation_pair(l: &HnfLattice, max_squares: u64) -> Result<PermutationPair> {
    let n = l.index();
    if n > max_squares {
        return Err(LatticeError::Budget {
            n,
            needed: n,
            cap: max_squares,
        });
    }
    let (w, h, t) = (l.w as usize, l.h as usize, l.t as usize);
    let n = n as usize;
    let mut hp = vec![0; n];
    let mut vp = vec![0; n];
    for j in 0..h {
        for i in 0..w {
            let idx = i + w * j;
            hp[idx] = (i + 1) % w + w * j;
            vp[idx] = if j + 1 < h { i + w * (j + 1) } else { (i + t) % w };
        }
    }
    Ok(PermutationPair { n, h: hp, v: vp })
}

/// Apply `steps` random elementary column operations to `g`: swap the
/// generators, negate one, or add a small multiple of one to the other.
///
/// Deterministic in `seed`. An addition that would overflow `i64` is
/// replaced by a swap.
pub fn random_unimodular(g: &GeneratorPair, seed: u64, steps: u32) -> GeneratorPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut u, mut v) = (g.u, g.v);
    for _ in 0..steps {
        match rng.gen_range(0..4) {
            0 => std::mem::swap(&mut u, &mut v),
            1 => {
                let target = if rng.gen() { &mut u } else { &mut v };
                *target = [-target[0], -target[1]];
            }
            _ => {
                let k: i64 = loop {
                    let k = rng.gen_range(-3..=3);
                    if k != 0 {
                        break k;
                    }
                };
                let into_u: bool = rng.gen();
                let (dst, src) = if into_u { (u, v) } else { (v, u) };
                let sum = (|| {
                    Some([
                        dst[0].checked_add(k.checked_mul(src[0])?)?,
                        dst[1].checked_add(k.checked_mul(src[1])?)?,
                    ])
                })();
                match sum {
                    Some(s) if into_u => u = s,
                    Some(s) => v = s,
                    None => std::mem::swap(&mut u, &mut v),
                }
            }
        }
    }
    GeneratorPair { u, v, index: g.index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(u: [i64; 2], v: [i64; 2]) -> GeneratorPair {
        GeneratorPair::new(u, v).unwrap()
    }

    fn hnf(w: u64, h: u64, t: u64) -> HnfLattice {
        HnfLattice::new(w, h, t).unwrap()
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(GeneratorPair::new([0, 0], [1, 2]), Err(LatticeError::Rank { .. })));
        assert!(matches!(GeneratorPair::new([2, 4], [1, 2]), Err(LatticeError::Rank { .. })));
        assert!(matches!(GeneratorPair::new([3, 0], [0, 0]), Err(LatticeError::Rank { .. })));
        // |det| = 2^127 does not fit
        assert!(GeneratorPair::new([i64::MIN, 0], [0, i64::MIN]).is_err());
    }

    #[test]
    fn index_examples() {
        assert_eq!(lattice_index(&pair([1, 0], [0, 1])), 1);
        assert_eq!(lattice_index(&pair([3, 0], [1, 2])), 6);
        assert_eq!(lattice_index(&pair([2, 4], [1, 5])), 6);
        // orientation does not matter
        assert_eq!(lattice_index(&pair([1, 5], [2, 4])), 6);
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&pair([1, 0], [0, 1])), 1);
        assert_eq!(content(&pair([2, 0], [0, 2])), 2);
        let g = pair([2, 4], [6, 2]);
        assert_eq!(content(&g), 2);
        assert_eq!(lattice_index(&g), 20);
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf_reduce(&pair([1, 0], [0, 1])), Ok(hnf(1, 1, 0)));
        assert_eq!(hnf_reduce(&pair([2, 0], [0, 2])), Ok(hnf(2, 2, 0)));

        let g = pair([0, 2], [3, 1]);
        let l = hnf_reduce(&g).unwrap();
        assert_eq!(l, hnf(6, 1, 3));
        assert!(l.generators().unwrap().same_lattice(&g));
        // (3, 0) is not in span{(0, 2), (3, 1)}
        assert!(!g.contains([3, 0]));
    }

    #[test]
    fn hnf_negative_and_swapped_inputs() {
        let l = hnf(4, 3, 1);
        let base = l.generators().unwrap();
        for g in [
            pair([-4, 0], [1, 3]),
            pair([1, 3], [4, 0]),
            pair([-1, -3], [-4, 0]),
            pair([5, 3], [6, 6]),
        ] {
            assert!(g.same_lattice(&base), "{g}");
            assert_eq!(hnf_reduce(&g), Ok(l), "{g}");
        }
    }

    #[test]
    fn hnf_extreme_entries() {
        let g = pair([i64::MAX, 1], [i64::MAX - 1, 1]);
        assert_eq!(lattice_index(&g), 1);
        assert_eq!(hnf_reduce(&g), Ok(hnf(1, 1, 0)));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_shape(&pair([1, 0], [0, 1])), Ok(QuotientShape { d1: 1, d2: 1 }));
        assert_eq!(smith_shape(&pair([2, 0], [0, 2])), Ok(QuotientShape { d1: 2, d2: 2 }));
        assert_eq!(smith_shape(&pair([2, 0], [1, 2])), Ok(QuotientShape { d1: 1, d2: 4 }));
        assert_eq!(smith_shape(&pair([6, 0], [4, 2])), Ok(QuotientShape { d1: 2, d2: 6 }));
        // needs the d1 | d2 fix-up: diag(2, 3) -> (1, 6)
        assert_eq!(smith_shape(&pair([2, 0], [0, 3])), Ok(QuotientShape { d1: 1, d2: 6 }));
    }

    #[test]
    fn cyclic_examples() {
        assert!(is_cyclic(&hnf(2, 2, 1)));
        assert!(!is_cyclic(&hnf(2, 2, 0)));
        assert!(!is_cyclic(&hnf(6, 2, 4)));
        assert!(is_cyclic(&hnf(1, 1, 0)));
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive(&pair([1, 0], [0, 1])));
        assert!(!is_primitive(&pair([2, 0], [0, 2])));
        assert!(is_primitive(&pair([3, 0], [1, 2])));
    }

    #[test]
    fn triple_validation() {
        assert!(HnfLattice::new(0, 1, 0).is_err());
        assert!(HnfLattice::new(1, 0, 0).is_err());
        assert!(HnfLattice::new(3, 1, 3).is_err());
        assert!(HnfLattice::new(u64::MAX, 2, 0).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let all: Vec<_> = enumerate_lattices(1, DEFAULT_MAX_TRIPLES).unwrap().collect();
        assert_eq!(all, vec![hnf(1, 1, 0)]);

        let all: Vec<_> = enumerate_lattices(2, DEFAULT_MAX_TRIPLES).unwrap().collect();
        assert_eq!(all, vec![hnf(1, 2, 0), hnf(2, 1, 0), hnf(2, 1, 1)]);
        assert!(all.iter().all(is_cyclic));

        let all: Vec<_> = enumerate_lattices(4, DEFAULT_MAX_TRIPLES).unwrap().collect();
        assert_eq!(all.len(), 7);
        let non_cyclic: Vec<_> = all.iter().filter(|l| !is_cyclic(l)).collect();
        assert_eq!(non_cyclic, vec![&hnf(2, 2, 0)]);
    }

    #[test]
    fn enumerate_is_sorted_and_exact_size() {
        let it = enumerate_lattices(360, DEFAULT_MAX_TRIPLES).unwrap();
        assert_eq!(it.len(), 1170);
        let all: Vec<_> = it.collect();
        assert_eq!(all.len(), 1170);
        assert!(all.windows(2).all(|p| (p[0].w, p[0].t) < (p[1].w, p[1].t)));
    }

    #[test]
    fn enumerate_budget() {
        assert_eq!(
            enumerate_lattices(4, 6).unwrap_err(),
            LatticeError::Budget { n: 4, needed: 7, cap: 6 }
        );
        assert!(matches!(enumerate_lattices(0, 10), Err(LatticeError::Arith(_))));
    }

    #[test]
    fn permutation_examples() {
        let p = to_permutation_pair(&hnf(1, 1, 0), 100).unwrap();
        assert_eq!((p.h.clone(), p.v.clone()), (vec![0], vec![0]));
        assert!(p.group_is_cyclic());

        let p = to_permutation_pair(&hnf(2, 1, 1), 100).unwrap();
        assert_eq!((p.h.clone(), p.v.clone()), (vec![1, 0], vec![1, 0]));
        assert_eq!(p.group_elements().len(), 2);
        assert!(p.group_is_cyclic());

        let p = to_permutation_pair(&hnf(2, 2, 0), 100).unwrap();
        assert_eq!(p.h, vec![1, 0, 3, 2]);
        assert_eq!(p.v, vec![2, 3, 0, 1]);
        let group = p.group_elements();
        assert_eq!(group.len(), 4);
        assert!(group.iter().all(|g| element_order(g) <= 2));
        assert!(!p.group_is_cyclic());
    }

    #[test]
    fn permutation_budget() {
        assert!(matches!(
            to_permutation_pair(&hnf(5, 5, 0), 24),
            Err(LatticeError::Budget { n: 25, .. })
        ));
    }

    #[test]
    fn unimodular_zero_steps_is_identity() {
        let g = pair([3, -7], [11, 2]);
        assert_eq!(random_unimodular(&g, 42, 0), g);
    }

    #[test]
    fn unimodular_is_deterministic() {
        let g = pair([3, -7], [11, 2]);
        assert_eq!(random_unimodular(&g, 9, 25), random_unimodular(&g, 9, 25));
    }

    #[test]
    fn unimodular_overflow_falls_back() {
        let g = pair([i64::MAX, 0], [0, 1]);
        for seed in 0..50 {
            let h = random_unimodular(&g, seed, 20);
            assert!(h.same_lattice(&g));
        }
    }
}

//! Exponent vectors indexing the monomial basis `z^alpha`.

use std::cmp::Ordering;

/// Exponent vector `alpha` of a monomial `z^alpha = z_1^{a_1} ... z_n^{a_n}`.
///
/// Ordered by total degree first, then within a degree shell so that larger
/// leading exponents come first: `(1,0) < (0,1)` and `(2,0) < (1,1) < (0,2)`.
/// This matches the enumeration order of [`enumerate_multiindices`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The standard unit index `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Component-wise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Component-wise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Component-wise difference; requires `self.dominates(other)`.
    pub fn minus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Falling-factorial coefficient `prod_i a_i! / (a_i - b_i)!` from
    /// term-wise differentiation of `z^alpha` by `d^beta`.
    pub fn falling_factorial(&self, beta: &MultiIndex) -> f64 {
        let mut f = 1.0;
        for (&a, &b) in self.0.iter().zip(&beta.0) {
            for k in 0..b {
                f *= (a - k) as f64;
            }
        }
        f
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                // Within a shell, larger leading exponents sort first.
                for (a, b) in self.0.iter().zip(&other.0) {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

/// All multiindices of dimension `n` with `|alpha| <= max_degree`,
/// in the graded order of [`MultiIndex`]'s `Ord`.
pub fn enumerate_multiindices(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    assert!(n >= 1, "dimension must be at least 1");
    let mut out = Vec::with_capacity(count_multiindices(n, max_degree) as usize);
    let mut current = vec![0u32; n];
    for deg in 0..=max_degree {
        fill_shell(&mut out, &mut current, 0, deg);
    }
    out
}

fn fill_shell(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill_shell(out, current, pos + 1, remaining - a);
    }
}

/// `C(n + N, n)`, the number of multiindices with `|alpha| <= N`.
pub fn count_multiindices(n: usize, max_degree: u32) -> u64 {
    let mut c: u64 = 1;
    for k in 1..=n as u64 {
        c = c * (max_degree as u64 + k) / k;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dim_enumeration() {
        let idx = enumerate_multiindices(1, 2);
        assert_eq!(idx.len(), 3);
        assert_eq!(idx, vec![MultiIndex(vec![0]), MultiIndex(vec![1]), MultiIndex(vec![2])]);
    }

    #[test]
    fn two_dim_degree_one() {
        let idx = enumerate_multiindices(2, 1);
        assert_eq!(
            idx,
            vec![MultiIndex(vec![0, 0]), MultiIndex(vec![1, 0]), MultiIndex(vec![0, 1])]
        );
    }

    #[test]
    fn count_matches_binomial() {
        // C(7,3) = 35 by direct binomial evaluation.
        let idx = enumerate_multiindices(3, 4);
        assert_eq!(idx.len(), 35);
        assert_eq!(count_multiindices(3, 4), 35);
    }

    #[test]
    fn strictly_increasing_and_deterministic() {
        let idx = enumerate_multiindices(3, 5);
        for w in idx.windows(2) {
            assert!(w[0] < w[1], "{:?} !< {:?}", w[0], w[1]);
        }
        assert_eq!(idx, enumerate_multiindices(3, 5));
    }

    #[test]
    fn falling_factorials() {
        let a = MultiIndex(vec![3, 2]);
        let b = MultiIndex(vec![2, 0]);
        assert_eq!(a.falling_factorial(&b), 6.0);
        let c = MultiIndex(vec![1, 1]);
        assert_eq!(a.falling_factorial(&c), 6.0);
    }
}

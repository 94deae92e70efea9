use std::fmt;

use super::{Bits, Poset, PosetError};

/// A permutation of element indices that is its own inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Involution {
    perm: Vec<usize>,
}

impl Involution {
    pub fn new(perm: Vec<usize>) -> Result<Self, PosetError> {
        let n = perm.len();
        if let Some((i, &p)) = perm.iter().enumerate().find(|(_, &p)| p >= n) {
            return Err(PosetError::NotAnInvolution(format!("index {i} maps to {p}, out of range")));
        }
        if let Some(i) = (0..n).find(|&i| perm[perm[i]] != i) {
            return Err(PosetError::NotAnInvolution(format!(
                "{i} -> {} -> {} does not return",
                perm[i], perm[perm[i]]
            )));
        }
        Ok(Involution { perm })
    }

    pub fn identity(n: usize) -> Self {
        Involution { perm: (0..n).collect() }
    }

    /// Parses transpositions such as `"1:3,2:4"` against the labels of `poset`.
    /// Unlisted elements are fixed.
    pub fn parse_swaps(poset: &Poset, swaps: &str) -> Result<Self, PosetError> {
        let mut perm: Vec<usize> = (0..poset.len()).collect();
        let mut touched = vec![false; poset.len()];
        for part in swaps.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| PosetError::NotAnInvolution(format!("expected a:b, got {part:?}")))?;
            let lookup = |s: &str| poset.index_of(s.trim()).ok_or_else(|| PosetError::UnknownLabel(s.trim().into()));
            let (i, j) = (lookup(a)?, lookup(b)?);
            for k in [i, j] {
                if touched[k] {
                    return Err(PosetError::NotAnInvolution(format!(
                        "element {:?} appears in more than one swap",
                        poset.label(k)
                    )));
                }
                touched[k] = true;
            }
            perm[i] = j;
            perm[j] = i;
        }
        Involution::new(perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.perm[i] == i).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Non-trivial swaps `(i, σ(i))` with `i < σ(i)`.
    pub fn swaps(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter(|&i| self.perm[i] > i).map(|i| (i, self.perm[i])).collect()
    }

    fn image(&self, set: &Bits) -> Bits {
        Bits::from_indices(self.len(), set.ones().map(|i| self.perm[i]))
    }
}

impl fmt::Debug for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for (i, j) in self.swaps() {
            write!(f, "({} {})", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// σ is weakly order-preserving if every `{j : i < j or σ(i) < j}` is mapped
/// onto itself by σ.
pub fn is_weakly_order_preserving(poset: &Poset, sigma: &Involution) -> Result<bool, PosetError> {
    if sigma.len() != poset.len() {
        return Err(PosetError::SizeMismatch { expected: poset.len(), got: sigma.len() });
    }
    Ok((0..poset.len()).all(|i| {
        let mut u = poset.above(i).clone();
        u.union_with(poset.above(sigma.apply(i)));
        sigma.image(&u) == u
    }))
}

/// Every weakly order-preserving involution of `poset`.
pub fn weakly_op_involutions(poset: &Poset, limit: usize) -> Result<Vec<Involution>, PosetError> {
    if poset.len() > limit {
        return Err(PosetError::TooLarge { size: poset.len(), limit });
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..poset.len()).collect();
    enumerate_involutions(&mut perm, 0, &mut |p| {
        let sigma = Involution { perm: p.to_vec() };
        if is_weakly_order_preserving(poset, &sigma).expect("sizes match") {
            out.push(sigma);
        }
    });
    Ok(out)
}

// Walks all involutions: position `at` is either fixed or swapped with a later free position.
fn enumerate_involutions(perm: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == perm.len() {
        visit(perm);
        return;
    }
    if perm[at] != at {
        return enumerate_involutions(perm, at + 1, visit);
    }
    enumerate_involutions(perm, at + 1, visit);
    for j in at + 1..perm.len() {
        if perm[j] == j {
            perm[at] = j;
            perm[j] = at;
            enumerate_involutions(perm, at + 1, visit);
            perm[at] = at;
            perm[j] = j;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swaps(n: usize, pairs: &[(usize, usize)]) -> Involution {
        let mut p: Vec<usize> = (0..n).collect();
        for &(a, b) in pairs {
            p.swap(a, b);
        }
        Involution::new(p).unwrap()
    }

    #[test]
    fn rejects_non_involutions() {
        assert!(matches!(Involution::new(vec![1, 2, 0]), Err(PosetError::NotAnInvolution(_))));
        assert!(matches!(Involution::new(vec![3]), Err(PosetError::NotAnInvolution(_))));
    }

    #[test]
    fn n_examples() {
        let n = Poset::zigzag_n();
        assert!(is_weakly_order_preserving(&n, &Involution::identity(4)).unwrap());
        assert!(is_weakly_order_preserving(&n, &swaps(4, &[(0, 2)])).unwrap());
        assert!(!is_weakly_order_preserving(&n, &swaps(4, &[(1, 3)])).unwrap());
    }

    #[test]
    fn n_has_three() {
        let all = weakly_op_involutions(&Poset::zigzag_n(), crate::poset::INVOLUTION_LIMIT).unwrap();
        let expect = vec![Involution::identity(4), swaps(4, &[(0, 2), (1, 3)]), swaps(4, &[(0, 2)])];
        let mut got = all.clone();
        got.sort_by_key(|s| s.perm.clone());
        let mut want = expect;
        want.sort_by_key(|s| s.perm.clone());
        assert_eq!(got, want);
    }

    #[test]
    fn small_shapes() {
        assert_eq!(weakly_op_involutions(&Poset::antichain(2), 10).unwrap().len(), 2);
        assert_eq!(weakly_op_involutions(&Poset::chain(2), 10).unwrap(), vec![Involution::identity(2)]);
        assert!(matches!(
            weakly_op_involutions(&Poset::antichain(11), 10),
            Err(PosetError::TooLarge { size: 11, limit: 10 })
        ));
    }

    #[test]
    fn enumeration_counts_all_involutions() {
        // Telephone numbers 1, 1, 2, 4, 10, 26, 76.
        for (n, count) in [1usize, 1, 2, 4, 10, 26, 76].into_iter().enumerate() {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut seen = 0;
            enumerate_involutions(&mut perm, 0, &mut |_| seen += 1);
            assert_eq!(seen, count);
        }
        // Every involution of an antichain is weakly order-preserving.
        assert_eq!(weakly_op_involutions(&Poset::antichain(6), 10).unwrap().len(), 76);
    }

    #[test]
    fn parse_swaps_by_label() {
        let n = Poset::zigzag_n();
        assert_eq!(Involution::parse_swaps(&n, "1:3, 2:4").unwrap(), swaps(4, &[(0, 2), (1, 3)]));
        assert_eq!(Involution::parse_swaps(&n, "").unwrap(), Involution::identity(4));
        assert!(Involution::parse_swaps(&n, "1:3,3:2").is_err());
        assert!(matches!(Involution::parse_swaps(&n, "1:9"), Err(PosetError::UnknownLabel(_))));
    }
}

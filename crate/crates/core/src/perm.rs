//! Permutations of `{1, ..., n}` in one-line notation.
//!
//! Positions and values are 1-based on every public surface. A [`Permutation`]
//! is an immutable value: all operations return a fresh permutation.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` accepted at construction. Keeps `C(n, 2)` and pair counts well
/// inside `u64`.
pub const MAX_N: usize = 1_000_000;

/// A bijection on `{1, ..., n}` written as `values[0] values[1] ... values[n-1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

/// The transposition `(i, i+1)` acting on the left, i.e. it exchanges the
/// positions holding the values `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjacentValueSwap(u32);

impl AdjacentValueSwap {
    pub fn new(value: u32) -> Self {
        AdjacentValueSwap(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AdjacentValueSwap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Permutation {
    /// Validates `raw` as a bijection on `{1, ..., raw.len()}`.
    pub fn from_one_line(raw: impl Into<Vec<u32>>) -> Result<Self> {
        let values = raw.into();
        let n = values.len();
        if n == 0 {
            return Err(Error::NotAPermutation("empty sequence".into()));
        }
        if n > MAX_N {
            return Err(Error::TooLarge { n, max: MAX_N });
        }
        let mut seen = vec![false; n];
        for (pos, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(Error::NotAPermutation(format!(
                    "value {v} at position {} is outside 1..={n}",
                    pos + 1
                )));
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(Error::NotAPermutation(format!(
                    "value {v} repeated at position {}",
                    pos + 1
                )));
            }
        }
        Ok(Permutation { values })
    }

    /// Caller guarantees `values` is a bijection on `1..=len`.
    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_one_line(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "identity: n = {n} out of range");
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn reverse_identity(n: usize) -> Self {
        assert!(
            (1..=MAX_N).contains(&n),
            "reverse_identity: n = {n} out of range"
        );
        Permutation {
            values: (1..=n as u32).rev().collect(),
        }
    }

    /// The transposition `(value, value+1)` as a permutation of `n`.
    pub fn transposition(value: u32, n: usize) -> Result<Self> {
        Permutation::identity(n).apply_value_swap(AdjacentValueSwap(value))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept alongside `len` for the usual pairing.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// Value at the 1-based `position`.
    pub fn at(&self, position: usize) -> u32 {
        self.values[position - 1]
    }

    /// 1-based position of `value`.
    pub fn position_of(&self, value: u32) -> usize {
        self.values
            .iter()
            .position(|&v| v == value)
            .map(|p| p + 1)
            .expect("value outside 1..=n")
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().zip(1..).all(|(&v, k)| v == k)
    }

    /// `k -> outer(inner(k))`.
    pub fn compose(outer: &Permutation, inner: &Permutation) -> Result<Self> {
        check_same_size(outer, inner)?;
        Ok(Permutation {
            values: inner
                .values
                .iter()
                .map(|&k| outer.values[k as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut values = vec![0; self.len()];
        for (pos, &v) in self.values.iter().enumerate() {
            values[v as usize - 1] = pos as u32 + 1;
        }
        Permutation { values }
    }

    /// Left multiplication by `(i, i+1)`: the positions holding `i` and `i+1`
    /// exchange contents.
    pub fn apply_value_swap(&self, swap: AdjacentValueSwap) -> Result<Self> {
        let i = swap.value();
        let n = self.len();
        if i == 0 || i as usize >= n {
            return Err(Error::SwapOutOfRange { value: i, n });
        }
        let values = self
            .values
            .iter()
            .map(|&v| match v {
                v if v == i => i + 1,
                v if v == i + 1 => i,
                v => v,
            })
            .collect();
        Ok(Permutation { values })
    }

    /// Digits run together (`132465879`) when every value is a single digit,
    /// otherwise the space-separated form.
    pub fn compact(&self) -> String {
        if self.len() <= 9 {
            self.values.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

pub(crate) fn check_same_size(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Accepts values separated by whitespace, commas, or both. A single run of
/// two or more digits with no separator (`58327164`) is read one digit per
/// value, since it can never be a valid permutation otherwise.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if let [word] = tokens[..] {
            if word.len() > 1 && word.bytes().all(|b| b.is_ascii_digit()) {
                let values: Vec<u32> = word.bytes().map(|b| (b - b'0') as u32).collect();
                return Permutation::from_one_line(values);
            }
        }
        let values = tokens
            .into_iter()
            .enumerate()
            .map(|(i, token)| {
                token.parse::<u32>().map_err(|_| Error::Parse {
                    position: i + 1,
                    token: token.to_string(),
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        Permutation::from_one_line(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn all(n: usize) -> Vec<Permutation> {
        (1..=n as u32)
            .permutations(n)
            .map(|v| Permutation::from_one_line(v).unwrap())
            .collect()
    }

    #[test]
    fn constructs_from_one_line() {
        let sigma = Permutation::from_one_line(vec![5, 8, 3, 2, 7, 1, 6, 4]).unwrap();
        assert_eq!(sigma.compact(), "58327164");
        assert_eq!(Permutation::from_one_line(vec![1]).unwrap().len(), 1);
        assert!(matches!(
            Permutation::from_one_line(vec![1, 1, 2]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            Permutation::from_one_line(Vec::new()),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            Permutation::from_one_line(vec![0, 1]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn parses_both_separators() {
        assert_eq!(p("5 8 3 2 7 1 6 4"), p("5,8,3,2,7,1,6,4"));
        assert_eq!(p(" 2, 1 "), p("2 1"));
        assert_eq!(p("58327164"), p("5 8 3 2 7 1 6 4"));
        assert!(matches!(
            "1123".parse::<Permutation>(),
            Err(Error::NotAPermutation(_))
        ));
        assert_eq!(p("2 1").to_string(), "2 1");
        assert_eq!(
            "1 x 3".parse::<Permutation>(),
            Err(Error::Parse {
                position: 2,
                token: "x".into()
            })
        );
    }

    #[test]
    fn identities() {
        assert_eq!(Permutation::identity(4).compact(), "1234");
        assert_eq!(Permutation::identity(1).compact(), "1");
        assert_eq!(Permutation::identity(9).compact(), "123456789");
        assert_eq!(Permutation::reverse_identity(4).compact(), "4321");
        assert_eq!(Permutation::reverse_identity(5).compact(), "54321");
        assert_eq!(Permutation::reverse_identity(1).compact(), "1");
    }

    #[test]
    fn compose_and_inverse() {
        let e = Permutation::identity(5);
        assert_eq!(Permutation::compose(&e, &p("25314")).unwrap(), p("25314"));
        // 21345 ∘ 14325: k=1..5 -> outer(1,4,3,2,5) = 2,4,3,1,5
        assert_eq!(
            Permutation::compose(&p("21345"), &p("14325")).unwrap(),
            p("24315")
        );
        assert_eq!(p("25314").inverse(), p("41352"));
        assert_eq!(p("1234").inverse(), p("1234"));
        let rev = Permutation::reverse_identity(6);
        assert_eq!(rev.inverse(), rev);
        assert_eq!(
            Permutation::compose(&p("123"), &p("12")),
            Err(Error::SizeMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn value_swaps() {
        let sigma = p("14325");
        let step = sigma.apply_value_swap(AdjacentValueSwap::new(1)).unwrap();
        assert_eq!(step, p("24315"));
        assert_eq!(
            step.apply_value_swap(AdjacentValueSwap::new(4)).unwrap(),
            p("25314")
        );
        assert_eq!(
            step.apply_value_swap(AdjacentValueSwap::new(1)).unwrap(),
            sigma
        );
        assert_eq!(
            sigma.apply_value_swap(AdjacentValueSwap::new(5)),
            Err(Error::SwapOutOfRange { value: 5, n: 5 })
        );
        assert!(sigma.apply_value_swap(AdjacentValueSwap::new(0)).is_err());
    }

    #[test]
    fn group_laws_exhaustive() {
        for n in 1..=5 {
            let perms = all(n);
            let e = Permutation::identity(n);
            for a in &perms {
                assert_eq!(&Permutation::compose(&e, a).unwrap(), a);
                assert_eq!(&Permutation::compose(a, &e).unwrap(), a);
                assert!(Permutation::compose(a, &a.inverse()).unwrap().is_identity());
                assert!(Permutation::compose(&a.inverse(), a).unwrap().is_identity());
                for i in 1..n as u32 {
                    let t = Permutation::transposition(i, n).unwrap();
                    assert_eq!(
                        a.apply_value_swap(AdjacentValueSwap::new(i)).unwrap(),
                        Permutation::compose(&t, a).unwrap()
                    );
                }
            }
        }
        for n in 1..=5 {
            let perms = all(n);
            for a in &perms {
                for b in &perms {
                    let ab = Permutation::compose(a, b).unwrap();
                    for c in &perms {
                        let left = Permutation::compose(&ab, c).unwrap();
                        let right =
                            Permutation::compose(a, &Permutation::compose(b, c).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }
}

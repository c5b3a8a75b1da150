use std::fmt;

use smallvec::SmallVec;

pub type Exp = u16;

/// Dense exponent vector over the variables of a context.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(SmallVec<[Exp; 16]>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize, e: Exp) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn from_slice(e: &[Exp]) -> Self {
        Mono(SmallVec::from_slice(e))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn exps(&self) -> &[Exp] {
        &self.0
    }

    #[inline]
    pub fn exps_mut(&mut self) -> &mut [Exp] {
        &mut self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Exp {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, e: Exp) {
        self.0[i] = e;
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, w: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(w)
            .map(|(&e, &wi)| e as u64 * wi as u64)
            .sum()
    }

    /// Degree restricted to the listed variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.0[i] as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.len(), other.len());
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        Mono(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Copy with the given positions zeroed.
    pub fn without(&self, vars: &[usize]) -> Mono {
        let mut m = self.clone();
        for &i in vars {
            m.0[i] = 0;
        }
        m
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl FromIterator<Exp> for Mono {
    fn from_iter<I: IntoIterator<Item = Exp>>(iter: I) -> Self {
        Mono(iter.into_iter().collect())
    }
}

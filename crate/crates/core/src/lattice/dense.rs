use num_rational::Rational64;
use num_traits::{One, Zero};

use super::LatticeProvider;

pub type Rational = Rational64;

/// The rationals in `[0, 1]` under the numeric order: a dense chain with
/// exact comparisons, standing in for the real unit interval.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DenseUnitChain;

impl DenseUnitChain {
    /// A strictly intermediate element, witnessing density.
    pub fn between(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        (a != b).then(|| (a + b) / 2)
    }

    /// Every rational in `[0, 1]` with denominator at most `max_den`, sorted.
    pub fn sample(&self, max_den: i64) -> Vec<Rational> {
        let mut out: Vec<Rational> = (1..=max_den.max(1))
            .flat_map(|d| (0..=d).map(move |n| Rational::new(n, d)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl LatticeProvider for DenseUnitChain {
    type Elem = Rational;

    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
    fn meet(&self, a: &Rational, b: &Rational) -> Rational {
        *a.min(b)
    }
    fn join(&self, a: &Rational, b: &Rational) -> Rational {
        *a.max(b)
    }
    fn bottom(&self) -> Rational {
        Rational::zero()
    }
    fn top(&self) -> Rational {
        Rational::one()
    }
    fn contains(&self, a: &Rational) -> bool {
        *a >= Rational::zero() && *a <= Rational::one()
    }
    fn is_finite(&self) -> bool {
        false
    }
    fn enumerate(&self) -> Option<Vec<Rational>> {
        None
    }
    fn label(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn parse_element(&self, label: &str) -> Option<Rational> {
        let q: Rational = label.parse().ok()?;
        self.contains(&q).then_some(q)
    }
}

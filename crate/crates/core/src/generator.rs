use crate::error::{Error, Result};
use crate::set::StateSet;
use crate::state::{check_same, low_mask, CoordinateSet, DimensionCap, StateVector, UpdateMask};

/// The generator function Φ: {0,1}^n → {0,1}^n, stored as an explicit table.
///
/// `table[e]` is the image of the state whose integer encoding is `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFunction {
    n: usize,
    table: Vec<u32>,
    names: Option<Vec<String>>,
    source: Option<String>,
}

impl GeneratorFunction {
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        Self::from_table_capped(n, table, DimensionCap::default())
    }

    pub fn from_table_capped(n: usize, table: Vec<u32>, cap: DimensionCap) -> Result<Self> {
        cap.check(n)?;
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v & !low_mask(n) != 0) {
            return Err(Error::BitsOutOfRange {
                value: u64::from(bad),
                n,
            });
        }
        Ok(GeneratorFunction {
            n,
            table,
            names: None,
            source: None,
        })
    }

    /// Tabulates `f` over every state of {0,1}^n.
    pub fn from_fn<F: Fn(StateVector) -> StateVector>(n: usize, f: F) -> Result<Self> {
        let cap = DimensionCap::default();
        cap.check(n)?;
        let mut table = Vec::with_capacity(1usize << n);
        for e in 0..(1u32 << n) {
            let image = f(StateVector::from_raw(n, e));
            check_same(n, image.n())?;
            table.push(image.bits());
        }
        Self::from_table_capped(n, table, cap)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |mu| mu)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn with_source(mut self, source: String) -> Self {
        self.source = Some(source);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn state_count(&self) -> usize {
        self.table.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateVector> + '_ {
        let n = self.n;
        (0..self.table.len() as u32).map(move |e| StateVector::from_raw(n, e))
    }

    #[inline]
    pub(crate) fn image_raw(&self, mu: u32) -> u32 {
        self.table[mu as usize]
    }

    /// Unstable coordinates of `mu` as a packed mask.
    #[inline]
    pub(crate) fn unstable_raw(&self, mu: u32) -> u32 {
        mu ^ self.table[mu as usize]
    }

    #[inline]
    pub(crate) fn apply_raw(&self, mu: u32, nu: u32) -> u32 {
        mu ^ (nu & self.unstable_raw(mu))
    }

    /// Φ(μ).
    pub fn evaluate(&self, mu: StateVector) -> Result<StateVector> {
        check_same(self.n, mu.n())?;
        Ok(StateVector::from_raw(self.n, self.image_raw(mu.bits())))
    }

    /// The coordinates i with Φ_i(μ) ≠ μ_i.
    pub fn unstable_set(&self, mu: StateVector) -> Result<CoordinateSet> {
        check_same(self.n, mu.n())?;
        Ok(CoordinateSet::from_raw(
            self.n,
            self.unstable_raw(mu.bits()),
        ))
    }

    /// Φ^ν(μ): coordinates selected by ν take their Φ value, the rest hold.
    pub fn apply_mask(&self, mu: StateVector, nu: UpdateMask) -> Result<StateVector> {
        check_same(self.n, mu.n())?;
        check_same(self.n, nu.n())?;
        Ok(StateVector::from_raw(
            self.n,
            self.apply_raw(mu.bits(), nu.bits()),
        ))
    }

    /// Φ^{α^0...α^k}(μ), a left fold of [`apply_mask`](Self::apply_mask).
    pub fn iterate<'a, I>(&self, mu: StateVector, masks: I) -> Result<StateVector>
    where
        I: IntoIterator<Item = &'a UpdateMask>,
    {
        check_same(self.n, mu.n())?;
        masks
            .into_iter()
            .try_fold(mu, |acc, nu| self.apply_mask(acc, *nu))
    }

    pub fn is_fixed_point(&self, mu: StateVector) -> Result<bool> {
        check_same(self.n, mu.n())?;
        Ok(self.unstable_raw(mu.bits()) == 0)
    }

    /// Every μ with Φ(μ) = μ.
    pub fn fixed_points(&self) -> StateSet {
        StateSet::from_indices(
            self.n,
            (0..self.table.len()).filter(|&e| self.table[e] == e as u32),
        )
    }
}

use super::pmf::{Pmf, MASS_FLOOR};

/// Law of the number of records in a uniform random permutation of length
/// `m`, i.e. of `sum_{i=1}^m Ber(1/i)` with independent summands.
///
/// Masses are `c(m, k) / m!` with `c` the unsigned Stirling numbers of the
/// first kind. Built by `m` successive two-point convolutions; edge masses
/// below [`MASS_FLOOR`] move into the truncated tail.
pub fn record_count_pmf(m: usize) -> Pmf {
    let mut chain = RecordChain::new();
    for _ in 0..m {
        chain.step();
    }
    chain.to_pmf()
}

/// All record-count laws `R_0, ..., R_{m_max}` in one pass.
pub fn record_count_table(m_max: usize) -> Vec<Pmf> {
    let mut chain = RecordChain::new();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(chain.to_pmf());
    for _ in 0..m_max {
        chain.step();
        out.push(chain.to_pmf());
    }
    out
}

struct RecordChain {
    m: usize,
    offset: usize,
    masses: Vec<f64>,
    tail: f64,
}

impl RecordChain {
    fn new() -> Self {
        Self {
            m: 0,
            offset: 0,
            masses: vec![1.0],
            tail: 0.0,
        }
    }

    /// Convolves with `Ber(1/(m+1))`.
    fn step(&mut self) {
        self.m += 1;
        let p = 1.0 / self.m as f64;
        let q = 1.0 - p;
        let len = self.masses.len();
        self.masses.push(0.0);
        for k in (1..=len).rev() {
            self.masses[k] = self.masses[k] * q + self.masses[k - 1] * p;
        }
        self.masses[0] *= q;

        while self.masses.len() > 1 && self.masses[self.masses.len() - 1] < MASS_FLOOR {
            self.tail += self.masses.pop().unwrap();
        }
        let lead = self
            .masses
            .iter()
            .take(self.masses.len() - 1)
            .take_while(|&&x| x < MASS_FLOOR)
            .count();
        if lead > 0 {
            self.tail += self.masses.drain(..lead).sum::<f64>();
            self.offset += lead;
        }
    }

    fn to_pmf(&self) -> Pmf {
        Pmf::from_parts(self.offset, self.masses.clone(), self.tail)
    }
}

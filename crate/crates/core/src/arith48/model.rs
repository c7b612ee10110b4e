/// Counts are halved once their sum passes this value.
pub const RESCALE_LIMIT: u32 = 1024;

/// Adaptive probability estimate for one binary context.
///
/// `p(0) = count0 / (count0 + count1)`. Both counts start at 1 and never drop
/// below 1, so neither symbol ever gets probability zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryModel {
    count0: u32,
    count1: u32,
    adaptive: bool,
}

impl Default for BinaryModel {
    fn default() -> Self {
        Self::new()
    }
}

impl BinaryModel {
    /// Laplace-initialized adaptive model.
    pub const fn new() -> Self {
        Self {
            count0: 1,
            count1: 1,
            adaptive: true,
        }
    }

    /// A model that keeps the given counts forever.
    pub fn fixed(count0: u32, count1: u32) -> Self {
        assert!(count0 >= 1 && count1 >= 1, "counts must be positive");
        Self {
            count0,
            count1,
            adaptive: false,
        }
    }

    pub fn counts(&self) -> (u32, u32) {
        (self.count0, self.count1)
    }

    pub fn is_adaptive(&self) -> bool {
        self.adaptive
    }

    pub fn p0(&self) -> f64 {
        self.count0 as f64 / (self.count0 + self.count1) as f64
    }

    /// Width of the bit-0 sub-interval of `range`, clamped to `[1, range - 1]`.
    #[inline]
    pub fn split(&self, range: u64) -> u64 {
        debug_assert!(range >= 2);
        let total = (self.count0 + self.count1) as u128;
        let s = (range as u128 * self.count0 as u128 / total) as u64;
        s.clamp(1, range - 1)
    }

    #[inline]
    pub fn update(&mut self, bit: bool) {
        if !self.adaptive {
            return;
        }
        if bit {
            self.count1 += 1;
        } else {
            self.count0 += 1;
        }
        if self.count0 + self.count1 > RESCALE_LIMIT {
            self.count0 = self.count0.div_ceil(2);
            self.count1 = self.count1.div_ceil(2);
        }
    }
}

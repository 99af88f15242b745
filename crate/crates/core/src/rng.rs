//! Deterministic random streams.
//!
//! Every trial owns an [`RngStream`] derived from `(master_seed, trial_index)`,
//! so a run can be replayed bit-for-bit no matter how trials are scheduled.
//! The generator is xoshiro256** seeded through SplitMix64, both from
//! Blackman and Vigna's reference implementations.

use std::f64::consts::TAU;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64, used to expand a 64-bit seed into generator state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }
}

/// The SplitMix64 output finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A single-owner xoshiro256** stream.
///
/// Deliberately not `Copy`: duplicating a stream duplicates its draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    s: [u64; 4],
}

impl RngStream {
    /// Seeds a stream directly; the four state words come from SplitMix64.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let s = [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()];
        Self { seed, s }
    }

    /// Builds a stream from raw state words. All-zero state is invalid and
    /// is replaced by the SplitMix64 expansion of seed 0.
    pub fn from_state(s: [u64; 4]) -> Self {
        if s == [0; 4] {
            return Self::from_seed(0);
        }
        Self { seed: 0, s }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// A fair coin.
    pub fn uniform_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform integer in `[0, m)` by Lemire's multiply-and-reject method.
    ///
    /// # Panics
    /// Panics if `m == 0`.
    pub fn uniform_index(&mut self, m: usize) -> usize {
        assert!(m > 0, "uniform_index: empty range");
        let m = m as u64;
        let mut prod = (self.next_u64() as u128) * (m as u128);
        let mut low = prod as u64;
        if low < m {
            let threshold = m.wrapping_neg() % m;
            while low < threshold {
                prod = (self.next_u64() as u128) * (m as u128);
                low = prod as u64;
            }
        }
        (prod >> 64) as usize
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn uniform_real(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate (Box-Muller, cosine branch only).
    pub fn gauss(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform_real(); // (0, 1]
        let u2 = self.uniform_real();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }
}

/// Derives the stream for one trial. The result depends only on the pair,
/// so trials may run in any order or concurrently.
pub fn derive_stream(master_seed: u64, trial_index: u64) -> RngStream {
    let key = mix64(master_seed.wrapping_add(GOLDEN_GAMMA))
        ^ mix64(
            trial_index
                .wrapping_mul(GOLDEN_GAMMA)
                .wrapping_add(0xD1B5_4A32_D192_ED03),
        );
    RngStream::from_seed(mix64(key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_vector() {
        let mut sm = SplitMix64::new(0);
        assert_eq!(sm.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(sm.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(sm.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn xoshiro_first_output_from_known_state() {
        // rotl(2 * 5, 7) * 9 = 11520
        let mut r = RngStream::from_state([1, 2, 3, 4]);
        assert_eq!(r.next_u64(), 11520);
        assert_eq!(r.next_u64(), 0);
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = derive_stream(42, 0);
        let mut b = derive_stream(42, 0);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_trials_diverge() {
        let mut a = derive_stream(42, 0);
        let mut b = derive_stream(42, 1);
        let pa: Vec<u64> = (0..100).map(|_| a.next_u64()).collect();
        let pb: Vec<u64> = (0..100).map(|_| b.next_u64()).collect();
        assert_ne!(pa, pb);
        let mut c = derive_stream(43, 0);
        assert_ne!(pa[0], c.next_u64());
    }

    #[test]
    fn stream_is_schedule_independent() {
        let expect: Vec<u64> = {
            let mut r = derive_stream(42, 7);
            (0..16).map(|_| r.next_u64()).collect()
        };
        let got: Vec<Vec<u64>> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4)
                .map(|_| {
                    s.spawn(|| {
                        let mut r = derive_stream(42, 7);
                        (0..16).map(|_| r.next_u64()).collect::<Vec<u64>>()
                    })
                })
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for g in got {
            assert_eq!(g, expect);
        }
    }

    #[test]
    fn uniform_index_single_outcome() {
        let mut r = RngStream::from_seed(1);
        for _ in 0..100 {
            assert_eq!(r.uniform_index(1), 0);
        }
    }

    #[test]
    #[should_panic]
    fn uniform_index_zero_panics() {
        RngStream::from_seed(1).uniform_index(0);
    }

    #[test]
    fn uniform_index_covers_range() {
        let mut r = RngStream::from_seed(9);
        let mut counts = [0usize; 7];
        for _ in 0..70_000 {
            counts[r.uniform_index(7)] += 1;
        }
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }

    #[test]
    fn uniform_real_mean() {
        let mut r = derive_stream(5, 0);
        let n = 100_000;
        let mean = (0..n).map(|_| r.uniform_real()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");
    }

    #[test]
    fn uniform_bit_frequency() {
        let mut r = derive_stream(5, 1);
        let n = 100_000;
        let ones = (0..n).filter(|_| r.uniform_bit()).count();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn gauss_moments_and_one_sigma_mass() {
        let mut r = derive_stream(11, 3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| r.gauss()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let inside = xs.iter().filter(|x| x.abs() <= 1.0).count() as f64 / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var.sqrt() - 1.0).abs() < 0.02, "std {}", var.sqrt());
        // Phi(1) - Phi(-1) = 0.682689...
        assert!((inside - 0.6827).abs() < 0.01, "mass {inside}");
    }
}

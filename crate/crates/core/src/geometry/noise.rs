//! Seeded improved gradient noise.
//!
//! The evaluation follows Ken Perlin's 2002 reference "improved noise". Only
//! the permutation differs: instead of the fixed reference table, the 256
//! entries `0..=255` are shuffled from the seed with the following procedure,
//! which other implementations must reproduce exactly for cross-language
//! agreement:
//!
//! 1. A SplitMix64 generator starts with `state = seed`. Each draw adds
//!    `0x9E3779B97F4A7C15` to the state (wrapping) and returns the standard
//!    SplitMix64 finalizer of the new state.
//! 2. Fisher-Yates from the top: for `i` in `255, 254, ..., 1`,
//!    `j = draw() % (i + 1)` and entries `i` and `j` are swapped.
//! 3. The table is duplicated to 512 entries so lookups never wrap.

use super::Vec3;
use crate::scalar::Real;

/// SplitMix64 generator used for seeding the permutation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Improved gradient noise over a seeded permutation table.
#[derive(Clone)]
pub struct GradientNoise {
    perm: [u8; 512],
}

impl std::fmt::Debug for GradientNoise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradientNoise")
            .field("perm", &&self.perm[..8])
            .finish_non_exhaustive()
    }
}

impl GradientNoise {
    pub fn new(seed: u64) -> Self {
        let mut base: [u8; 256] = std::array::from_fn(|i| i as u8);
        let mut rng = SplitMix64::new(seed);
        for i in (1..256usize).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            base.swap(i, j);
        }
        let mut perm = [0u8; 512];
        perm[..256].copy_from_slice(&base);
        perm[256..].copy_from_slice(&base);
        GradientNoise { perm }
    }

    /// The first 256 entries of the shuffled table.
    pub fn permutation(&self) -> &[u8] {
        &self.perm[..256]
    }

    #[inline]
    fn p(&self, i: usize) -> usize {
        usize::from(self.perm[i])
    }

    /// Noise value at `point`, clamped to `[-1, 1]`. Zero at every lattice point.
    pub fn sample<T: Real>(&self, point: Vec3<T>) -> T {
        let (xf, yf, zf) = (point.x.floor(), point.y.floor(), point.z.floor());
        let cell = |v: T| (v.to_i64().unwrap_or(0) & 255) as usize;
        let (xi, yi, zi) = (cell(xf), cell(yf), cell(zf));
        let (x, y, z) = (point.x - xf, point.y - yf, point.z - zf);
        let (u, v, w) = (fade(x), fade(y), fade(z));
        let one = T::one();

        let a = self.p(xi) + yi;
        let aa = self.p(a) + zi;
        let ab = self.p(a + 1) + zi;
        let b = self.p(xi + 1) + yi;
        let ba = self.p(b) + zi;
        let bb = self.p(b + 1) + zi;

        let value = lerp(
            w,
            lerp(
                v,
                lerp(
                    u,
                    grad(self.p(aa), x, y, z),
                    grad(self.p(ba), x - one, y, z),
                ),
                lerp(
                    u,
                    grad(self.p(ab), x, y - one, z),
                    grad(self.p(bb), x - one, y - one, z),
                ),
            ),
            lerp(
                v,
                lerp(
                    u,
                    grad(self.p(aa + 1), x, y, z - one),
                    grad(self.p(ba + 1), x - one, y, z - one),
                ),
                lerp(
                    u,
                    grad(self.p(ab + 1), x, y - one, z - one),
                    grad(self.p(bb + 1), x - one, y - one, z - one),
                ),
            ),
        );
        value.max(-one).min(one)
    }
}

/// One-shot evaluation; builds the permutation table on every call, so use
/// [`GradientNoise`] when sampling many points.
pub fn noise3<T: Real>(point: Vec3<T>, seed: u64) -> T {
    GradientNoise::new(seed).sample(point)
}

#[inline]
fn fade<T: Real>(t: T) -> T {
    t * t * t * (t * (t * T::lit(6.0) - T::lit(15.0)) + T::lit(10.0))
}

#[inline]
fn lerp<T: Real>(t: T, a: T, b: T) -> T {
    a + t * (b - a)
}

#[inline]
fn grad<T: Real>(hash: usize, x: T, y: T, z: T) -> T {
    let h = hash & 15;
    let u = if h < 8 { x } else { y };
    let v = if h < 4 {
        y
    } else if h == 12 || h == 14 {
        x
    } else {
        z
    };
    (if h & 1 == 0 { u } else { -u }) + (if h & 2 == 0 { v } else { -v })
}

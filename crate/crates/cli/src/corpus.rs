//! Seeded random admissible orbits for self-checks and acceptance runs.

use dualradix_core::arith::{coprime, mod_inverse, modulo, mult_order, pow};
use dualradix_core::orbit::OrbitSpec;
use dualradix_core::system::{AdmissibleSequence, Tuple};
use dualradix_core::Int;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Ordered coprime pairs of distinct primes below 10.
pub const BASE_PAIRS: [(u32, u32); 12] =
    [(2, 3), (2, 5), (2, 7), (3, 2), (3, 5), (3, 7), (5, 2), (5, 3), (5, 7), (7, 2), (7, 3), (7, 5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_tau: usize,
    pub max_grade: u32,
    pub max_height: u32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { max_tau: 6, max_grade: 3, max_height: 3 }
    }
}

fn random_tuple(rng: &mut ChaCha8Rng, m: &Int, l: &Int, f: u32, max_height: u32) -> Tuple {
    let m_f = pow(m, f);
    let bound: i64 = m_f.clone().try_into().unwrap_or(i64::MAX);
    let a = loop {
        let a = Int::from(rng.gen_range(-bound + 1..bound));
        if coprime(&a, m) && coprime(&a, l) {
            break a;
        }
    };
    // Any s in a * <l> modulo m^f admits a witness.
    let order = mult_order(l, &m_f).expect("l is a unit modulo m^f");
    let shift = rng.gen_range(0..order) as u32;
    let s = modulo(&(&a * mod_inverse(&pow(l, shift), &m_f).expect("unit")), &m_f);
    let h = rng.gen_range(1..=max_height);
    Tuple { s, a, h }
}

/// One orbit with bases from [`BASE_PAIRS`], `τ <= max_tau`, `f_v <= max_grade`
/// and heights `<= max_height`, translations bounded by `m^{f_v}`.
pub fn random_spec(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> OrbitSpec {
    loop {
        let (m, l) = BASE_PAIRS[rng.gen_range(0..BASE_PAIRS.len())];
        let (m, l) = (Int::from(m), Int::from(l));
        let tau = rng.gen_range(1..=cfg.max_tau);
        let f: Vec<u32> = (0..tau).map(|_| rng.gen_range(1..=cfg.max_grade)).collect();
        let tuples = f.iter().map(|&fv| random_tuple(rng, &m, &l, fv, cfg.max_height)).collect();
        let built = AdmissibleSequence::new(m, l, f, tuples).and_then(OrbitSpec::new);
        if let Ok(spec) = built {
            return spec;
        }
    }
}

pub fn corpus(seed: u64, count: usize, cfg: &CorpusConfig) -> Vec<OrbitSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng, cfg)).collect()
}

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Independent random-number roles within one (base_seed, trial) pair.
/// Keeping roles on separate streams means, e.g., that two policies
/// consuming different amounts of policy randomness still see identical
/// reward and preference draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamRole {
    Reward,
    Preference,
    Policy,
    Protocol,
}

impl StreamRole {
    fn tag(self) -> &'static [u8] {
        match self {
            StreamRole::Reward => b"reward",
            StreamRole::Preference => b"preference",
            StreamRole::Policy => b"policy",
            StreamRole::Protocol => b"protocol",
        }
    }
}

/// Derives the deterministic generator for one (base_seed, trial, role)
/// triple. Streams for distinct triples are independent by construction:
/// the 256-bit ChaCha key is a SHA-256 digest of the triple.
pub fn derive_stream(base_seed: u64, trial: u64, role: StreamRole) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"prefmab.stream.v1");
    hasher.update(base_seed.to_le_bytes());
    hasher.update(trial.to_le_bytes());
    hasher.update(role.tag());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

//! Seed derivation for experiment streams.
//!
//! Every dataset in an experiment is generated from its own ChaCha key
//! derived from `(seed, stream, N, replicate, member)`.

/// Which dataset of a cell a seed feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Train,
    Test,
    Family,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Train => 1,
            Stream::Test => 2,
            Stream::Family => 3,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one dataset stream.
pub fn stream_seed(seed: u64, stream: Stream, n_total: usize, replicate: usize, member: usize) -> u64 {
    [stream.tag(), n_total as u64, replicate as u64, member as u64]
        .into_iter()
        .fold(splitmix64(seed), |acc, part| splitmix64(acc ^ splitmix64(part)))
}

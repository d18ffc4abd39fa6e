use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MatrixLaw;
use crate::tropical::TropicalMatrix;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial random source.
///
/// The ChaCha8 key is `splitmix64(splitmix64(seed) ^ trial)`, so the stream
/// of a trial depends only on `(seed, trial)`.
#[derive(Clone, Debug)]
pub struct SampleStream {
    seed: u64,
    trial: u64,
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        let key = splitmix64(splitmix64(seed) ^ trial);
        Self {
            seed,
            trial,
            rng: ChaCha8Rng::seed_from_u64(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    pub(crate) fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Derives a sub-seed, e.g. one per component, from a master seed.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(salt.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `A(0), A(1), …`
    Forward,
    /// `A(−1), A(−2), …`
    Backward,
}

/// Infinite iterator over support indices of `A(0), A(1), …` (forward) or
/// `A(−1), A(−2), …` (backward).
pub struct IndexSampler<'a> {
    law: &'a MatrixLaw,
    stream: SampleStream,
    direction: Direction,
    state: Option<usize>,
    iid: Option<WeightedIndex<f64>>,
}

impl<'a> IndexSampler<'a> {
    pub fn new(law: &'a MatrixLaw, stream: SampleStream, direction: Direction) -> Self {
        let iid = match law {
            MatrixLaw::FiniteIid(l) => Some(
                WeightedIndex::new(l.atoms().iter().map(|a| a.prob))
                    .expect("validated atom probabilities"),
            ),
            _ => None,
        };
        Self {
            law,
            stream,
            direction,
            state: None,
            iid,
        }
    }

    pub fn law(&self) -> &'a MatrixLaw {
        self.law
    }

    /// Draws the next index and returns the matrix it selects.
    pub fn next_matrix(&mut self) -> &'a TropicalMatrix {
        let k = self.next_index();
        self.law.matrix(k)
    }

    pub fn next_index(&mut self) -> usize {
        match self.law {
            MatrixLaw::Deterministic(_) => 0,
            // i.i.d. sequences are exchangeable: the backward sampler is the forward one
            MatrixLaw::FiniteIid(_) => self
                .iid
                .as_ref()
                .expect("iid sampler")
                .sample(self.stream.rng()),
            MatrixLaw::Markov(l) => {
                let next = match (self.state, self.direction) {
                    (None, _) => l.initial_dist.sample(self.stream.rng()),
                    (Some(s), Direction::Forward) => l.forward_dist[s].sample(self.stream.rng()),
                    (Some(s), Direction::Backward) => l.backward_dist[s].sample(self.stream.rng()),
                };
                self.state = Some(next);
                next
            }
        }
    }
}

impl Iterator for IndexSampler<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        Some(self.next_index())
    }
}

impl MatrixLaw {
    pub fn sampler(&self, stream: SampleStream, direction: Direction) -> IndexSampler<'_> {
        IndexSampler::new(self, stream, direction)
    }

    /// Support indices of `A(0), …, A(n−1)`.
    pub fn forward_indices(&self, n: usize, stream: SampleStream) -> Vec<usize> {
        self.sampler(stream, Direction::Forward).take(n).collect()
    }

    /// Support indices of `A(−1), …, A(−n)`.
    pub fn backward_indices(&self, n: usize, stream: SampleStream) -> Vec<usize> {
        self.sampler(stream, Direction::Backward).take(n).collect()
    }

    pub fn sample_forward(&self, n: usize, stream: SampleStream) -> Vec<TropicalMatrix> {
        self.forward_indices(n, stream)
            .into_iter()
            .map(|k| self.matrix(k).clone())
            .collect()
    }

    pub fn sample_backward(&self, n: usize, stream: SampleStream) -> Vec<TropicalMatrix> {
        self.backward_indices(n, stream)
            .into_iter()
            .map(|k| self.matrix(k).clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{example1_law, IidLaw};

    const NEG: f64 = f64::NEG_INFINITY;

    fn coin(p: f64) -> MatrixLaw {
        let b = TropicalMatrix::from_f64_rows(&[[0.0, NEG], [1.0, 1.0]]).unwrap();
        let c = TropicalMatrix::from_f64_rows(&[[NEG, 0.0], [0.0, NEG]]).unwrap();
        if p >= 1.0 {
            MatrixLaw::FiniteIid(IidLaw::from_pairs(vec![(b, 1.0)]).unwrap())
        } else {
            MatrixLaw::FiniteIid(IidLaw::from_pairs(vec![(b, p), (c, 1.0 - p)]).unwrap())
        }
    }

    fn frequencies(indices: &[usize], k: usize) -> Vec<f64> {
        let mut counts = vec![0usize; k];
        for &i in indices {
            counts[i] += 1;
        }
        counts
            .into_iter()
            .map(|c| c as f64 / indices.len() as f64)
            .collect()
    }

    #[test]
    fn deterministic_law_repeats_its_matrix() {
        let a = TropicalMatrix::from_f64_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let law = MatrixLaw::Deterministic(a.clone());
        assert_eq!(
            law.sample_forward(3, SampleStream::new(1, 0)),
            vec![a.clone(); 3]
        );
        assert_eq!(law.sample_backward(2, SampleStream::new(1, 0)), vec![a; 2]);
    }

    #[test]
    fn degenerate_probability_gives_constant_sequence() {
        let law = coin(1.0);
        assert!(law
            .forward_indices(50, SampleStream::new(3, 0))
            .iter()
            .all(|&k| k == 0));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let law = coin(0.5);
        let a = law.forward_indices(200, SampleStream::new(42, 7));
        let b = law.forward_indices(200, SampleStream::new(42, 7));
        let c = law.forward_indices(200, SampleStream::new(42, 8));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn iid_frequencies_match_probabilities() {
        let law = coin(0.5);
        let f = frequencies(&law.forward_indices(10_000, SampleStream::new(11, 0)), 2);
        assert!((f[0] - 0.5).abs() < 0.02, "{f:?}");

        let law = coin(0.3);
        let f = frequencies(&law.forward_indices(100_000, SampleStream::new(12, 0)), 2);
        assert!((f[0] - 0.3).abs() < 0.01, "{f:?}");
    }

    #[test]
    fn backward_and_forward_iid_agree_in_distribution() {
        let law = coin(0.5);
        let f = frequencies(&law.forward_indices(10_000, SampleStream::new(5, 0)), 2);
        let b = frequencies(&law.backward_indices(10_000, SampleStream::new(5, 1)), 2);
        assert!((f[0] - b[0]).abs() < 0.02);
    }

    #[test]
    fn markov_state_frequencies_match_stationary_law() {
        let chain = example1_law(0.3, 0.2).unwrap();
        let pi = chain.stationary().to_vec();
        let law = MatrixLaw::Markov(chain);
        for (direction, trial) in [(Direction::Forward, 0), (Direction::Backward, 1)] {
            let idx: Vec<usize> = law
                .sampler(SampleStream::new(9, trial), direction)
                .take(100_000)
                .collect();
            let f = frequencies(&idx, 4);
            for (a, b) in f.iter().zip(&pi) {
                assert!((a - b).abs() < 0.01, "{direction:?}: {f:?} vs {pi:?}");
            }
        }
    }

    #[test]
    fn markov_forward_paths_follow_transition_support() {
        let chain = example1_law(0.3, 0.2).unwrap();
        let p = chain.transition().to_vec();
        let law = MatrixLaw::Markov(chain);
        let idx = law.forward_indices(5_000, SampleStream::new(1, 0));
        assert!(idx.windows(2).all(|w| p[w[0]][w[1]] > 0.0));
        // backward paths follow the support of the transposed kernel
        let idx = law.backward_indices(5_000, SampleStream::new(1, 0));
        assert!(idx.windows(2).all(|w| p[w[1]][w[0]] > 0.0));
    }
}

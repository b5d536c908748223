use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{
    require_nonempty, sort_tags, AudioTag, AudioTagger, EmbedTarget, GroundedDetector,
    JointEmbedder, MaskCandidate, Prompt, PromptableSegmenter, ProposalDetector, RecordKey,
    SAMPLE_AUDIO_CLASSES,
};
use crate::embedding::EmbeddingVector;
use crate::error::Result;
use crate::frame::FramePair;
use crate::geometry::{rasterize_box, BoundingBox, ScoredBox};

/// Seeded stand-in for live models.
///
/// Every answer is a pure function of `(seed, record key)`: the key is hashed
/// together with the seed to seed a fresh ChaCha stream, so two mocks with the same
/// seed agree exactly regardless of call order.
#[derive(Debug, Clone)]
pub struct MockBackend {
    seed: u64,
    embedding_dim: usize,
}

impl MockBackend {
    pub fn new(seed: u64, embedding_dim: usize) -> Self {
        assert!(embedding_dim > 0, "embedding dim must be positive");
        MockBackend {
            seed,
            embedding_dim,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng_for(&self, key: &RecordKey) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(key.to_string().as_bytes());
        let digest = hasher.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        ChaCha8Rng::from_seed(seed)
    }
}

fn random_box(rng: &mut ChaCha8Rng, width: u32, height: u32) -> BoundingBox {
    let (w, h) = (width as f64, height as f64);
    let x0 = rng.random_range(0.0..w * 0.8);
    let y0 = rng.random_range(0.0..h * 0.8);
    let x1 = rng.random_range(x0 + 1.0..=w);
    let y1 = rng.random_range(y0 + 1.0..=h);
    BoundingBox::new(x0, y0, x1, y1).expect("sampled box has positive area")
}

fn random_scored_boxes(rng: &mut ChaCha8Rng, frame: &FramePair, max: usize) -> Vec<ScoredBox> {
    let n = rng.random_range(0..=max);
    (0..n)
        .map(|_| {
            let b = random_box(rng, frame.width, frame.height);
            ScoredBox::new(b, rng.random_range(0.0..=1.0)).expect("score in range")
        })
        .collect()
}

impl AudioTagger for MockBackend {
    fn tag_audio(&self, frame: &FramePair) -> Result<Vec<AudioTag>> {
        let mut rng = self.rng_for(&RecordKey::audio_tags(&frame.frame_id));
        let n = rng.random_range(0..=5usize);
        let mut tags = (0..n)
            .map(|_| {
                let (idx, label) = SAMPLE_AUDIO_CLASSES[rng.random_range(0..SAMPLE_AUDIO_CLASSES.len())];
                AudioTag::new(label, idx, rng.random_range(0.0..=1.0))
            })
            .collect::<Result<Vec<_>>>()?;
        sort_tags(&mut tags);
        Ok(tags)
    }
}

impl GroundedDetector for MockBackend {
    fn detect_grounded(&self, frame: &FramePair, phrases: &[String]) -> Result<Vec<ScoredBox>> {
        require_nonempty(phrases, "grounding phrases")?;
        let mut out = Vec::new();
        for phrase in phrases {
            let mut rng = self.rng_for(&RecordKey::grounded(&frame.frame_id, phrase));
            out.extend(random_scored_boxes(&mut rng, frame, 2));
        }
        Ok(out)
    }
}

impl ProposalDetector for MockBackend {
    fn propose_class_agnostic(&self, frame: &FramePair) -> Result<Vec<ScoredBox>> {
        let mut rng = self.rng_for(&RecordKey::proposals(&frame.frame_id));
        Ok(random_scored_boxes(&mut rng, frame, 6))
    }
}

impl PromptableSegmenter for MockBackend {
    fn segment(&self, frame: &FramePair, prompts: &[Prompt]) -> Result<Vec<MaskCandidate>> {
        require_nonempty(prompts, "segmentation prompts")?;
        let (w, h) = (frame.width, frame.height);
        let mut out = Vec::new();
        for prompt in prompts {
            let mut rng = self.rng_for(&RecordKey::mask_candidates(frame, prompt));
            let n = rng.random_range(0..=3usize);
            for _ in 0..n {
                let region = match prompt {
                    Prompt::Box(b) => {
                        let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-3.0..=3.0);
                        BoundingBox::new(
                            b.x_min() + jitter(&mut rng),
                            b.y_min() + jitter(&mut rng),
                            (b.x_max() + jitter(&mut rng)).max(b.x_min() + 4.0),
                            (b.y_max() + jitter(&mut rng)).max(b.y_min() + 4.0),
                        )?
                    }
                    Prompt::Point { x, y } => {
                        let rx = rng.random_range(2.0..w as f64 / 3.0);
                        let ry = rng.random_range(2.0..h as f64 / 3.0);
                        BoundingBox::new(x - rx, y - ry, x + rx, y + ry)?
                    }
                };
                out.push(MaskCandidate {
                    mask: rasterize_box(&region, w, h),
                    quality: rng.random_range(0.5..=1.0),
                    prompt: *prompt,
                });
            }
        }
        Ok(out)
    }
}

impl JointEmbedder for MockBackend {
    fn embed(&self, frame: &FramePair, target: &EmbedTarget) -> Result<EmbeddingVector> {
        let mut rng = self.rng_for(&RecordKey::embedding(&frame.frame_id, target));
        let mut values: Vec<f64> = (0..self.embedding_dim)
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        if values.iter().all(|&v| v == 0.0) {
            values[0] = 1.0;
        }
        EmbeddingVector::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_agrees_and_call_order_is_irrelevant() {
        let a = MockBackend::new(11, 8);
        let b = MockBackend::new(11, 8);
        let f1 = FramePair::synthetic("v", 1);
        let f2 = FramePair::synthetic("v", 2);
        let first = a.tag_audio(&f1).unwrap();
        let _ = a.tag_audio(&f2).unwrap();
        assert_eq!(a.tag_audio(&f1).unwrap(), first);
        assert_eq!(b.tag_audio(&f1).unwrap(), first);
        assert_eq!(
            a.embed(&f2, &EmbedTarget::Audio).unwrap(),
            b.embed(&f2, &EmbedTarget::Audio).unwrap()
        );
        assert_eq!(
            a.propose_class_agnostic(&f1).unwrap(),
            b.propose_class_agnostic(&f1).unwrap()
        );
    }

    #[test]
    fn outputs_respect_invariants() {
        let m = MockBackend::new(3, 5);
        for i in 1..=5 {
            let f = FramePair::synthetic("clip", i);
            let tags = m.tag_audio(&f).unwrap();
            assert!(tags.windows(2).all(|w| w[0].probability() >= w[1].probability()));
            let props = m.propose_class_agnostic(&f).unwrap();
            let prompts: Vec<Prompt> = props.iter().map(|p| Prompt::Box(p.bbox)).collect();
            if !prompts.is_empty() {
                for c in m.segment(&f, &prompts).unwrap() {
                    assert_eq!(c.mask.dims(), (f.width, f.height));
                    assert!((0.0..=1.0).contains(&c.quality));
                }
            }
            assert_eq!(m.embed(&f, &EmbedTarget::Audio).unwrap().dim(), 5);
        }
    }

    #[test]
    fn empty_prompt_lists_are_rejected() {
        let m = MockBackend::new(0, 4);
        let f = FramePair::synthetic("v", 1);
        assert!(m.segment(&f, &[]).is_err());
        assert!(m.detect_grounded(&f, &[]).is_err());
    }
}

//! Deterministic synthetic scenes: an interchange bundle plus a matching
//! AVSBench-layout mini-dataset, generated from a seed.
//!
//! Each video holds a few elliptical objects drifting across five frames; some of
//! them are "sounding". The bundle records what idealised models would answer:
//! sounding labels get high tag probabilities, object boxes get high objectness,
//! crops of an object embed near that object's label prototype and the audio
//! embeds near the sounding prototypes. Distractor tags, junk proposals and
//! background masks are mixed in so every filter has something to reject.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::{Rgb, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::backend::{
    AudioTag, Bundle, CandidateRecord, EmbedTarget, Prompt, Record, RecordKey, RecordedBackend,
    SAMPLE_AUDIO_CLASSES,
};
use crate::embedding::EmbeddingVector;
use crate::error::{CmsfError, Result};
use crate::frame::{FramePair, FRAME_SIZE};
use crate::geometry::{box_iou, mask_union, rasterize_box, BinaryMask, BoundingBox, PixelRect, ScoredBox};
use crate::harness::{write_bundle, Split, FRAMES_PER_VIDEO};
use crate::pipelines::grid_points;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone)]
pub struct FixtureOptions {
    pub seed: u64,
    pub s4_videos: usize,
    pub ms3_videos: usize,
    /// Grid size the SAM-BIND point records are generated for.
    pub grid_size: u32,
    pub embedding_dim: usize,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        FixtureOptions {
            seed: DEFAULT_SEED,
            s4_videos: 2,
            ms3_videos: 1,
            grid_size: 16,
            embedding_dim: 32,
        }
    }
}

impl FixtureOptions {
    pub fn with_seed(seed: u64) -> Self {
        FixtureOptions {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixtureFrame {
    pub frame: FramePair,
    pub image: RgbImage,
    pub gt: BinaryMask,
}

#[derive(Debug, Clone)]
pub struct FixtureVideo {
    pub split: Split,
    pub video_id: String,
    pub frames: Vec<FixtureFrame>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub bundle: Bundle,
    pub videos: Vec<FixtureVideo>,
}

#[derive(Debug, Clone)]
struct SceneObject {
    class: usize,
    rect: PixelRect,
    sounding: bool,
    color: [u8; 3],
}

impl SceneObject {
    fn mask(&self) -> BinaryMask {
        let r = self.rect;
        let cx = (r.x0 + r.x1) as f64 / 2.0;
        let cy = (r.y0 + r.y1) as f64 / 2.0;
        let rx = (r.x1 - r.x0) as f64 / 2.0;
        let ry = (r.y1 - r.y0) as f64 / 2.0;
        BinaryMask::from_fn(FRAME_SIZE, FRAME_SIZE, |x, y| {
            let dx = (x as f64 + 0.5 - cx) / rx;
            let dy = (y as f64 + 0.5 - cy) / ry;
            dx * dx + dy * dy <= 1.0
        })
    }

    fn bbox(&self) -> BoundingBox {
        self.rect.to_box().expect("object rects are non-empty")
    }

    fn label(&self) -> (u16, &'static str) {
        SAMPLE_AUDIO_CLASSES[self.class]
    }
}

fn unit_noise(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn mix(parts: &[(&[f64], f64)], dim: usize) -> Result<EmbeddingVector> {
    let mut v = vec![0.0; dim];
    for (p, w) in parts {
        for (acc, x) in v.iter_mut().zip(p.iter()) {
            *acc += w * x;
        }
    }
    EmbeddingVector::new(v)?.normalized()
}

fn jitter_box(rng: &mut ChaCha8Rng, b: &BoundingBox, amount: f64) -> BoundingBox {
    let lim = FRAME_SIZE as f64;
    let mut j = || rng.random_range(-amount..=amount);
    let x0 = (b.x_min() + j()).clamp(0.0, lim - 4.0);
    let y0 = (b.y_min() + j()).clamp(0.0, lim - 4.0);
    let x1 = (b.x_max() + j()).clamp(x0 + 4.0, lim);
    let y1 = (b.y_max() + j()).clamp(y0 + 4.0, lim);
    BoundingBox::new(x0, y0, x1, y1).expect("jittered box keeps positive area")
}

fn random_frame_box(rng: &mut ChaCha8Rng) -> BoundingBox {
    let lim = FRAME_SIZE as f64;
    let w = rng.random_range(16.0..100.0);
    let h = rng.random_range(16.0..100.0);
    let x0 = rng.random_range(0.0..lim - w);
    let y0 = rng.random_range(0.0..lim - h);
    BoundingBox::new(x0, y0, x0 + w, y0 + h).expect("positive size")
}

/// Collects records for one frame and interns mask PNGs by content.
struct FrameWriter<'a> {
    bundle: &'a mut Bundle,
    frame: FramePair,
    prefix: String,
    next_id: usize,
}

impl FrameWriter<'_> {
    fn next_path(&mut self, dir: &str) -> String {
        self.next_id += 1;
        format!("{}/{dir}/{:04}.json", self.prefix, self.next_id)
    }

    fn intern_mask(&mut self, mask: &BinaryMask) -> String {
        let rle = serde_json::to_vec(&mask.to_rle()).expect("RLE serializes");
        let digest = hex::encode(Sha256::digest(&rle));
        let path = format!("{}/masks/{}.png", self.prefix, &digest[..16]);
        self.bundle.masks.entry(path.clone()).or_insert_with(|| mask.clone());
        path
    }

    fn insert(&mut self, key: RecordKey, path: String, record: Record) -> bool {
        if self.bundle.get(&key).is_some() {
            return false;
        }
        self.bundle.insert(key, path, record);
        true
    }

    fn insert_candidates(&mut self, prompt: &Prompt, cands: Vec<(BinaryMask, f64)>) {
        let key = RecordKey::mask_candidates(&self.frame, prompt);
        if self.bundle.get(&key).is_some() {
            return;
        }
        let records = cands
            .into_iter()
            .map(|(m, quality)| CandidateRecord {
                mask: self.intern_mask(&m),
                quality,
            })
            .collect();
        let path = self.next_path("candidates");
        self.insert(key, path, Record::MaskCandidates(records));
    }
}

fn render_image(objects: &[SceneObject], masks: &[BinaryMask], t: u32) -> RgbImage {
    let mut img = RgbImage::from_fn(FRAME_SIZE, FRAME_SIZE, |x, y| {
        Rgb([(40 + x / 4) as u8, (60 + y / 4) as u8, (90 + t * 10) as u8])
    });
    for (obj, mask) in objects.iter().zip(masks) {
        for (x, y) in mask.foreground() {
            img.put_pixel(x, y, Rgb(obj.color));
        }
    }
    img
}

/// Generates the fixture in memory.
pub fn generate(opts: &FixtureOptions) -> Result<Fixture> {
    if opts.embedding_dim == 0 || opts.grid_size == 0 {
        return Err(CmsfError::InvalidValue("fixture dims must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dim = opts.embedding_dim;
    let prototypes: Vec<Vec<f64>> = (0..SAMPLE_AUDIO_CLASSES.len())
        .map(|_| unit_noise(&mut rng, dim))
        .collect();

    let mut bundle = Bundle::new(dim);
    bundle.metadata.insert("generator".into(), "cmsf synthetic fixtures".into());
    bundle.metadata.insert("seed".into(), opts.seed.to_string());
    bundle.metadata.insert("grid_size".into(), opts.grid_size.to_string());

    let plan: Vec<(Split, usize)> = (0..opts.s4_videos)
        .map(|i| (Split::S4, i))
        .chain((0..opts.ms3_videos).map(|i| (Split::MS3, i)))
        .collect();

    let mut videos = Vec::new();
    for (split, vi) in plan {
        let video_id = format!("{}_v{vi:02}", split.dir_name().to_ascii_lowercase());
        let (n_objects, n_sounding) = match split {
            Split::S4 => (2, 1),
            Split::MS3 => (3, 2),
        };
        let mut classes: Vec<usize> = (0..SAMPLE_AUDIO_CLASSES.len()).collect();
        for i in 0..classes.len() {
            let j = rng.random_range(i..classes.len());
            classes.swap(i, j);
        }
        let base: Vec<(SceneObject, (i32, i32))> = (0..n_objects)
            .map(|k| {
                let w = rng.random_range(40..110u32);
                let h = rng.random_range(40..110u32);
                let x0 = rng.random_range(10..FRAME_SIZE - w - 10);
                let y0 = rng.random_range(10..FRAME_SIZE - h - 10);
                let drift = (rng.random_range(-2..=2i32), rng.random_range(-2..=2i32));
                let color = [rng.random_range(0..=255u8), rng.random_range(0..=255u8), rng.random_range(0..=255u8)];
                let obj = SceneObject {
                    class: classes[k],
                    rect: PixelRect { x0, y0, x1: x0 + w, y1: y0 + h },
                    sounding: k < n_sounding,
                    color,
                };
                (obj, drift)
            })
            .collect();
        let distractors: Vec<usize> = classes[n_objects..n_objects + 2].to_vec();
        let loudness: Vec<f64> = (0..n_objects).map(|_| rng.random_range(0.5..1.0)).collect();

        let mut frames = Vec::new();
        for t in 1..=FRAMES_PER_VIDEO {
            let step = t as i32 - 1;
            let objects: Vec<SceneObject> = base
                .iter()
                .map(|(o, (dx, dy))| {
                    let shift = |v: u32, d: i32| (v as i32 + d * step) as u32;
                    SceneObject {
                        rect: PixelRect {
                            x0: shift(o.rect.x0, *dx),
                            y0: shift(o.rect.y0, *dy),
                            x1: shift(o.rect.x1, *dx),
                            y1: shift(o.rect.y1, *dy),
                        },
                        ..o.clone()
                    }
                })
                .collect();
            let masks: Vec<BinaryMask> = objects.iter().map(SceneObject::mask).collect();
            let gt = mask_union(
                FRAME_SIZE,
                FRAME_SIZE,
                objects.iter().zip(&masks).filter(|(o, _)| o.sounding).map(|(_, m)| m),
            )?;
            let background = mask_union(FRAME_SIZE, FRAME_SIZE, &masks)?.complement();

            let frame = FramePair::synthetic(&video_id, t);
            bundle.add_frame(&frame.frame_id, frame.width, frame.height);
            let mut w = FrameWriter {
                bundle: &mut bundle,
                frame: frame.clone(),
                prefix: frame.frame_id.clone(),
                next_id: 0,
            };

            // Audio tags.
            let mut tags = Vec::new();
            for o in &objects {
                let (idx, label) = o.label();
                let p = if o.sounding { rng.random_range(0.55..0.95) } else { rng.random_range(0.05..0.45) };
                tags.push(AudioTag::new(label, idx, p)?);
            }
            for &d in &distractors {
                let (idx, label) = SAMPLE_AUDIO_CLASSES[d];
                tags.push(AudioTag::new(label, idx, rng.random_range(0.0..0.6))?);
            }
            crate::backend::sort_tags(&mut tags);
            let path = format!("{}/audio_tags.json", w.prefix);
            w.insert(RecordKey::audio_tags(&frame.frame_id), path, Record::AudioTags(tags.clone()));

            // Grounded boxes, one record per tag label.
            let mut prompt_boxes = Vec::new();
            for tag in &tags {
                let mut boxes = Vec::new();
                if let Some(o) = objects.iter().find(|o| o.label().1 == tag.label) {
                    boxes.push(ScoredBox::new(jitter_box(&mut rng, &o.bbox(), 3.0), rng.random_range(0.35..0.9))?);
                } else if rng.random_bool(0.5) {
                    boxes.push(ScoredBox::new(random_frame_box(&mut rng), rng.random_range(0.1..0.5))?);
                }
                prompt_boxes.extend(boxes.iter().map(|b| b.bbox));
                let path = w.next_path("grounded");
                w.insert(RecordKey::grounded(&frame.frame_id, &tag.label), path, Record::Boxes(boxes));
            }

            // Class-agnostic proposals: every object plus junk.
            let mut proposals = Vec::new();
            for o in &objects {
                proposals.push(ScoredBox::new(jitter_box(&mut rng, &o.bbox(), 3.0), rng.random_range(0.55..0.95))?);
            }
            for _ in 0..3 {
                proposals.push(ScoredBox::new(random_frame_box(&mut rng), rng.random_range(0.05..0.7))?);
            }
            prompt_boxes.extend(proposals.iter().map(|b| b.bbox));
            let path = format!("{}/proposals.json", w.prefix);
            w.insert(RecordKey::proposals(&frame.frame_id), path, Record::Boxes(proposals.clone()));

            // Mask candidates for box prompts.
            for b in &prompt_boxes {
                let best = objects
                    .iter()
                    .zip(&masks)
                    .map(|(o, m)| (box_iou(b, &o.bbox()), m))
                    .filter(|(iou, _)| *iou >= 0.3)
                    .max_by(|a, b| a.0.total_cmp(&b.0));
                let raster = rasterize_box(b, FRAME_SIZE, FRAME_SIZE);
                let cands = match best {
                    Some((_, m)) => vec![
                        (m.clone(), rng.random_range(0.85..0.99)),
                        (raster, rng.random_range(0.6..0.9)),
                    ],
                    None => vec![(raster, rng.random_range(0.4..0.9))],
                };
                w.insert_candidates(&Prompt::Box(*b), cands);
            }

            // Mask candidates for grid points.
            for p in grid_points(FRAME_SIZE, FRAME_SIZE, opts.grid_size) {
                let Prompt::Point { x, y } = p else { unreachable!() };
                let (px, py) = (x.floor() as u32, y.floor() as u32);
                let hit = objects.iter().zip(&masks).rev().find(|(_, m)| m.get(px, py));
                let cands = match hit {
                    Some((o, m)) => vec![
                        (m.clone(), rng.random_range(0.84..0.99)),
                        (rasterize_box(&o.bbox(), FRAME_SIZE, FRAME_SIZE), rng.random_range(0.6..0.92)),
                    ],
                    None if background.has_foreground() => vec![(background.clone(), rng.random_range(0.5..0.95))],
                    None => vec![],
                };
                w.insert_candidates(&p, cands);
            }

            // Crop embeddings for every proposal and every candidate's tight box.
            let mut crops: Vec<PixelRect> = proposals
                .iter()
                .map(|p| p.bbox.rounded_rect(FRAME_SIZE, FRAME_SIZE))
                .collect();
            let frame_records: Vec<Record> = w.bundle.frames[&frame.frame_id]
                .records
                .values()
                .map(|e| e.record.clone())
                .collect();
            for rec in frame_records {
                if let Record::MaskCandidates(cs) = rec {
                    for c in cs {
                        if let Some(r) = w.bundle.masks[&c.mask].tight_rect() {
                            crops.push(r);
                        }
                    }
                }
            }
            for rect in crops {
                let key = RecordKey::embedding(&frame.frame_id, &EmbedTarget::ImageCrop(rect));
                if w.bundle.get(&key).is_some() {
                    continue;
                }
                let noise = unit_noise(&mut rng, dim);
                let owner = rect.to_box().and_then(|cb| {
                    objects
                        .iter()
                        .map(|o| (box_iou(&cb, &o.bbox()), o))
                        .filter(|(iou, _)| *iou >= 0.5)
                        .max_by(|a, b| a.0.total_cmp(&b.0))
                });
                let emb = match owner {
                    Some((_, o)) => mix(&[(&prototypes[o.class], 1.0), (&noise, 0.3)], dim)?,
                    None => mix(&[(&noise, 1.0)], dim)?,
                };
                let path = w.next_path("embeddings");
                w.insert(key, path, Record::Embedding(emb));
            }

            // Audio embedding near the sounding prototypes.
            let noise = unit_noise(&mut rng, dim);
            let mut parts: Vec<(&[f64], f64)> = objects
                .iter()
                .zip(&loudness)
                .filter(|(o, _)| o.sounding)
                .map(|(o, l)| (prototypes[o.class].as_slice(), *l))
                .collect();
            parts.push((&noise, 0.3));
            let audio = mix(&parts, dim)?;
            let path = format!("{}/audio_embedding.json", w.prefix);
            w.insert(RecordKey::embedding(&frame.frame_id, &EmbedTarget::Audio), path, Record::Embedding(audio));

            let image = render_image(&objects, &masks, t);
            frames.push(FixtureFrame { frame, image, gt });
        }
        videos.push(FixtureVideo {
            split,
            video_id,
            frames,
        });
    }

    Ok(Fixture { bundle, videos })
}

/// A one-second silent 16 kHz mono PCM WAV file.
fn silent_wav() -> Vec<u8> {
    const RATE: u32 = 16_000;
    let data_len = RATE * 2;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&RATE.to_le_bytes());
    out.extend_from_slice(&(RATE * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    out.resize(44 + data_len as usize, 0);
    out
}

impl Fixture {
    pub fn frames(&self, split: Split) -> Vec<FramePair> {
        self.videos
            .iter()
            .filter(|v| v.split == split)
            .flat_map(|v| v.frames.iter().map(|f| f.frame.clone()))
            .collect()
    }

    pub fn all_frames(&self) -> Vec<FramePair> {
        self.videos
            .iter()
            .flat_map(|v| v.frames.iter().map(|f| f.frame.clone()))
            .collect()
    }

    pub fn backend(&self) -> Result<RecordedBackend> {
        RecordedBackend::new(self.bundle.clone(), "<fixture>")
    }

    pub fn bundle_dir(out: &Path) -> PathBuf {
        out.join("bundle")
    }

    pub fn dataset_dir(out: &Path) -> PathBuf {
        out.join("dataset")
    }

    /// Writes `<out>/bundle` and `<out>/dataset`.
    pub fn write(&self, out: &Path) -> Result<()> {
        write_bundle(&self.bundle, &Self::bundle_dir(out))?;
        let wav = silent_wav();
        let root = Self::dataset_dir(out);
        for v in &self.videos {
            let base = root.join(v.split.dir_name()).join(&v.video_id);
            for sub in ["frames", "audio", "gt"] {
                let d = base.join(sub);
                std::fs::create_dir_all(&d).map_err(|e| CmsfError::io(&d, e))?;
            }
            for f in &v.frames {
                let t = f.frame.index;
                let p = base.join(format!("frames/{t}.png"));
                f.image.save(&p).map_err(|e| CmsfError::load(&p, e.to_string()))?;
                let p = base.join(format!("audio/{t}.wav"));
                std::fs::write(&p, &wav).map_err(|e| CmsfError::io(&p, e))?;
                f.gt.write_png(&base.join(format!("gt/{t}.png")))?;
            }
        }
        Ok(())
    }

    /// Ground-truth masks keyed by frame id.
    pub fn ground_truth(&self) -> BTreeMap<String, BinaryMask> {
        self.videos
            .iter()
            .flat_map(|v| v.frames.iter().map(|f| (f.frame.frame_id.clone(), f.gt.clone())))
            .collect()
    }
}

/// Generates the default fixture for `seed` and writes it under `out`.
pub fn make_fixtures(out: &Path, seed: u64) -> Result<Fixture> {
    let fixture = generate(&FixtureOptions::with_seed(seed))?;
    fixture.write(out)?;
    Ok(fixture)
}


/// Tiny hand-written bundles with fully traceable expected outputs.
pub mod authored {
    use super::*;

    pub const CASCADE_VIDEO: &str = "cascade";
    pub const OWOD_VIDEO: &str = "owod";

    /// Box the single grounded detection returns in [`cascade`].
    pub fn cascade_box() -> BoundingBox {
        BoundingBox::new(10.0, 10.0, 60.0, 60.0).expect("valid")
    }

    /// The one mask candidate of [`cascade`]: only pixel `(0, 0)` set.
    pub fn cascade_mask() -> BinaryMask {
        let mut m = BinaryMask::empty(FRAME_SIZE, FRAME_SIZE);
        m.set(0, 0, true);
        m
    }

    /// One frame: a single tag `Dog` with probability `tag_probability`, one
    /// grounded box for it, one candidate of quality 0.95 for that box.
    pub fn cascade(tag_probability: f64) -> Result<Bundle> {
        let frame = FramePair::synthetic(CASCADE_VIDEO, 1);
        let id = frame.frame_id.clone();
        let mut b = Bundle::new(2);
        b.add_frame(&id, frame.width, frame.height);
        b.insert(
            RecordKey::audio_tags(&id),
            format!("{id}/audio_tags.json"),
            Record::AudioTags(vec![AudioTag::new("Dog", 74, tag_probability)?]),
        );
        b.insert(
            RecordKey::grounded(&id, "Dog"),
            format!("{id}/grounded/dog.json"),
            Record::Boxes(vec![ScoredBox::new(cascade_box(), 0.7)?]),
        );
        let mask_path = format!("{id}/masks/pixel.png");
        b.masks.insert(mask_path.clone(), cascade_mask());
        b.insert(
            RecordKey::mask_candidates(&frame, &Prompt::Box(cascade_box())),
            format!("{id}/candidates/dog.json"),
            Record::MaskCandidates(vec![CandidateRecord {
                mask: mask_path,
                quality: 0.95,
            }]),
        );
        Ok(b)
    }

    /// The two proposals of [`owod`], both with objectness 0.9.
    pub fn owod_boxes() -> [BoundingBox; 2] {
        [
            BoundingBox::new(20.0, 20.0, 80.0, 100.0).expect("valid"),
            BoundingBox::new(120.0, 30.0, 200.0, 150.0).expect("valid"),
        ]
    }

    /// Segmenter answer for each of [`owod_boxes`]: the box shrunk by 5 px.
    pub fn owod_segment_masks() -> [BinaryMask; 2] {
        owod_boxes().map(|b| {
            let inner = BoundingBox::new(b.x_min() + 5.0, b.y_min() + 5.0, b.x_max() - 5.0, b.y_max() - 5.0)
                .expect("valid");
            rasterize_box(&inner, FRAME_SIZE, FRAME_SIZE)
        })
    }

    /// One frame, two proposals of objectness 0.9 whose crops have cosine
    /// similarity 0.9 and 0.1 with the audio embedding.
    pub fn owod() -> Result<Bundle> {
        let frame = FramePair::synthetic(OWOD_VIDEO, 1);
        let id = frame.frame_id.clone();
        let mut b = Bundle::new(2);
        b.add_frame(&id, frame.width, frame.height);
        let boxes = owod_boxes();
        b.insert(
            RecordKey::proposals(&id),
            format!("{id}/proposals.json"),
            Record::Boxes(vec![ScoredBox::new(boxes[0], 0.9)?, ScoredBox::new(boxes[1], 0.9)?]),
        );
        b.insert(
            RecordKey::embedding(&id, &EmbedTarget::Audio),
            format!("{id}/audio_embedding.json"),
            Record::Embedding(EmbeddingVector::new(vec![1.0, 0.0])?),
        );
        let sims = [0.9f64, 0.1];
        for (i, (bx, s)) in boxes.iter().zip(sims).enumerate() {
            b.insert(
                RecordKey::embedding(&id, &EmbedTarget::crop(bx, frame.width, frame.height)),
                format!("{id}/embeddings/crop{i}.json"),
                Record::Embedding(EmbeddingVector::new(vec![s, (1.0 - s * s).sqrt()])?),
            );
        }
        for (i, (bx, m)) in boxes.iter().zip(owod_segment_masks()).enumerate() {
            let mask_path = format!("{id}/masks/seg{i}.png");
            b.masks.insert(mask_path.clone(), m);
            b.insert(
                RecordKey::mask_candidates(&frame, &Prompt::Box(*bx)),
                format!("{id}/candidates/box{i}.json"),
                Record::MaskCandidates(vec![CandidateRecord {
                    mask: mask_path,
                    quality: 0.93,
                }]),
            );
        }
        Ok(b)
    }
}

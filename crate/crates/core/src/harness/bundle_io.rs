//! On-disk interchange bundle: `manifest.json` plus one JSON file per record and
//! one PNG per distinct mask.
//!
//! ```text
//! <bundle>/manifest.json
//! <bundle>/<video_id>/<t>/audio_tags.json          {"tags": [...]}
//! <bundle>/<video_id>/<t>/grounded/<n>.json        {"boxes": [...]}
//! <bundle>/<video_id>/<t>/proposals.json           {"boxes": [...]}
//! <bundle>/<video_id>/<t>/candidates/<n>.json      {"candidates": [{"mask": "...png", "quality": q}]}
//! <bundle>/<video_id>/<t>/embeddings/<n>.json      {"dim": d, "values": [...]}
//! <bundle>/<video_id>/<t>/masks/<hash>.png
//! ```
//!
//! Record paths are free-form; the manifest is the only index. The layout above is
//! what the fixture generator emits.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Component, Path};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::backend::{
    AudioTag, Bundle, BundleFrame, CandidateRecord, Capability, Record, RecordEntry, RecordKey,
    RecordedBackend,
};
use crate::embedding::EmbeddingVector;
use crate::error::{CmsfError, Result};
use crate::geometry::{BinaryMask, ScoredBox};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleManifest {
    pub version: u32,
    pub embedding_dim: usize,
    #[serde(default)]
    pub incomplete: bool,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub frames: Vec<ManifestFrame>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFrame {
    pub frame_id: String,
    pub width: u32,
    pub height: u32,
    pub records: Vec<ManifestRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub capability: Capability,
    #[serde(default)]
    pub qualifier: Option<String>,
    pub path: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TagsFile {
    tags: Vec<AudioTag>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxesFile {
    boxes: Vec<ScoredBox>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidatesFile {
    candidates: Vec<CandidateRecord>,
}

fn check_relative(root: &Path, rel: &str) -> Result<()> {
    let p = Path::new(rel);
    if rel.is_empty() || !p.components().all(|c| matches!(c, Component::Normal(_))) {
        return Err(CmsfError::corrupt(root, format!("record path `{rel}` must be relative and normalized")));
    }
    Ok(())
}

fn parse_record(capability: Capability, bytes: &[u8]) -> serde_json::Result<Record> {
    Ok(match capability {
        Capability::AudioTags => Record::AudioTags(serde_json::from_slice::<TagsFile>(bytes)?.tags),
        Capability::GroundedBoxes | Capability::Proposals => {
            Record::Boxes(serde_json::from_slice::<BoxesFile>(bytes)?.boxes)
        }
        Capability::MaskCandidates => {
            Record::MaskCandidates(serde_json::from_slice::<CandidatesFile>(bytes)?.candidates)
        }
        Capability::ImageEmbedding | Capability::AudioEmbedding => {
            Record::Embedding(serde_json::from_slice::<EmbeddingVector>(bytes)?)
        }
    })
}

fn record_bytes(record: &Record) -> Result<Vec<u8>> {
    let mut bytes = match record {
        Record::AudioTags(tags) => serde_json::to_vec_pretty(&TagsFile { tags: tags.clone() })?,
        Record::Boxes(boxes) => serde_json::to_vec_pretty(&BoxesFile { boxes: boxes.clone() })?,
        Record::MaskCandidates(c) => serde_json::to_vec_pretty(&CandidatesFile {
            candidates: c.clone(),
        })?,
        Record::Embedding(e) => serde_json::to_vec_pretty(e)?,
    };
    bytes.push(b'\n');
    Ok(bytes)
}

/// Loads and validates a bundle directory into a read-only backend.
pub fn load_bundle(dir: &Path) -> Result<RecordedBackend> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let bytes = fs::read(&manifest_path).map_err(|e| CmsfError::corrupt(&manifest_path, e.to_string()))?;
    let manifest: BundleManifest =
        serde_json::from_slice(&bytes).map_err(|e| CmsfError::corrupt(&manifest_path, e.to_string()))?;

    let mut bundle = Bundle::new(manifest.embedding_dim);
    bundle.version = manifest.version;
    bundle.incomplete = manifest.incomplete;
    bundle.metadata = manifest.metadata;
    if bundle.incomplete {
        log::warn!("bundle {} is marked incomplete", dir.display());
    }

    let mut mask_paths = BTreeSet::new();
    for mf in manifest.frames {
        if bundle.frames.contains_key(&mf.frame_id) {
            return Err(CmsfError::corrupt(&manifest_path, format!("frame {} listed twice", mf.frame_id)));
        }
        let mut frame = BundleFrame {
            width: mf.width,
            height: mf.height,
            records: BTreeMap::new(),
        };
        for mr in mf.records {
            check_relative(dir, &mr.path)?;
            let key = RecordKey::new(&mf.frame_id, mr.capability, mr.qualifier);
            if frame.records.contains_key(&key) {
                return Err(CmsfError::corrupt(&manifest_path, format!("duplicate record {key}")));
            }
            let path = dir.join(&mr.path);
            let raw = fs::read(&path).map_err(|e| CmsfError::corrupt(&path, e.to_string()))?;
            let record = parse_record(key.capability, &raw).map_err(|e| CmsfError::corrupt(&path, e.to_string()))?;
            if let Record::MaskCandidates(cands) = &record {
                mask_paths.extend(cands.iter().map(|c| c.mask.clone()));
            }
            frame.records.insert(key, RecordEntry { path: mr.path, record });
        }
        bundle.frames.insert(mf.frame_id, frame);
    }

    for rel in mask_paths {
        check_relative(dir, &rel)?;
        let path = dir.join(&rel);
        let raw = fs::read(&path).map_err(|e| CmsfError::corrupt(&path, e.to_string()))?;
        let mask = BinaryMask::from_png_bytes(&raw).map_err(|e| CmsfError::corrupt(&path, e.to_string()))?;
        bundle.masks.insert(rel, mask);
    }

    RecordedBackend::new(bundle, dir)
}

fn manifest_of(bundle: &Bundle) -> BundleManifest {
    BundleManifest {
        version: bundle.version,
        embedding_dim: bundle.embedding_dim,
        incomplete: bundle.incomplete,
        metadata: bundle.metadata.clone(),
        frames: bundle
            .frames
            .iter()
            .map(|(id, f)| ManifestFrame {
                frame_id: id.clone(),
                width: f.width,
                height: f.height,
                records: f
                    .records
                    .iter()
                    .map(|(k, e)| ManifestRecord {
                        capability: k.capability,
                        qualifier: k.qualifier.clone(),
                        path: e.path.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Writes `bundle` under `dir` (created if needed). Output is a deterministic
/// function of the bundle contents.
pub fn write_bundle(bundle: &Bundle, dir: &Path) -> Result<()> {
    bundle.validate(dir)?;
    let mut files: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    for frame in bundle.frames.values() {
        for entry in frame.records.values() {
            check_relative(dir, &entry.path)?;
            let bytes = record_bytes(&entry.record)?;
            if let Some(prev) = files.get(&entry.path) {
                if *prev != bytes {
                    return Err(CmsfError::corrupt(dir.join(&entry.path), "two different records share this path"));
                }
            }
            files.insert(entry.path.clone(), bytes);
        }
    }
    for (rel, mask) in &bundle.masks {
        check_relative(dir, rel)?;
        if files.insert(rel.clone(), mask.to_png_bytes()?).is_some() {
            return Err(CmsfError::corrupt(dir.join(rel), "mask path collides with a record path"));
        }
    }
    let mut manifest = serde_json::to_vec_pretty(&manifest_of(bundle))?;
    manifest.push(b'\n');
    files.insert(MANIFEST_FILE.to_string(), manifest);

    for (rel, bytes) in files {
        let path = dir.join(&rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CmsfError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| CmsfError::io(&path, e))?;
    }
    Ok(())
}

/// SHA-256 over every regular file below `dir`, visited in sorted path order;
/// each file contributes its relative path, its length and its bytes.
pub fn directory_hash(dir: &Path) -> Result<String> {
    let mut hasher = Sha256::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| CmsfError::load(dir, e.to_string()))?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(dir).expect("walkdir stays under root");
        let rel = rel.to_string_lossy().replace('\\', "/");
        let bytes = fs::read(entry.path()).map_err(|e| CmsfError::io(entry.path(), e))?;
        hasher.update(rel.as_bytes());
        hasher.update([0u8]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hex::encode(hasher.finalize()))
}

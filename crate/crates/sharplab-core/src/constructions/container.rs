//! Binary container for saving and loading function families.
//!
//! ## Layout (all integers little-endian)
//!
//! | bytes        | content                                   |
//! |--------------|-------------------------------------------|
//! | `0..4`       | magic `SHLB`                              |
//! | `4..6`       | format version (`u16`, currently 1)       |
//! | `6..10`      | header length `H` (`u32`)                 |
//! | `10..10+H`   | UTF-8 JSON header                         |
//! | `10+H..`     | optional raw sample payload               |
//!
//! The header records the grid shape, the family kind, the construction
//! recipe (when the family came from one of the deterministic-given-seed
//! builders), the scales, and each member's band annotation. The payload,
//! when present, holds every member's samples as interleaved `(re, im)`
//! `f64` pairs in family order, `2^{Jd}` pairs per member.
//!
//! Because every built-in recipe is a pure function of its parameters and
//! seed, the payload is redundant for them and omitted by default: loading
//! rebuilds the members bit-for-bit. Hand-assembled (`custom`) families
//! have no recipe and must be saved with the payload.

use crate::constructions::families::{
    deterministic_family, oscillatory_family, smoothed_random_family, sobolev_family, FamilyKind,
    FunctionFamily, SobolevMode,
};
use crate::error::{Error, Result};
use crate::grid::{BandLimit, Grid, GridFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

const MAGIC: &[u8; 4] = b"SHLB";
const FORMAT_VERSION: u16 = 1;

/// The parameters of one of the built-in family constructions. A recipe
/// plus a grid rebuilds the family bit-for-bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyRecipe {
    /// [`smoothed_random_family`].
    RandomPeetre { levels: Vec<u32>, a: f64, m: u32, seed: u64 },
    /// [`deterministic_family`] over `k_lo..=k_hi`.
    Deterministic { n: u32, m: u32, k_lo: u32, k_hi: u32 },
    /// [`sobolev_family`]; `k_cap = None` means the full member count.
    Sobolev { n: u32, r: u32, sigma: f64, m: u32, seed: u64, k_cap: Option<u32> },
    /// [`oscillatory_family`].
    Oscillatory { l: u32, gamma: f64, p: f64, seed: u64 },
}

impl FamilyRecipe {
    /// The family kind this recipe produces.
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyRecipe::RandomPeetre { .. } => FamilyKind::RandomPeetre,
            FamilyRecipe::Deterministic { .. } => FamilyKind::Deterministic,
            FamilyRecipe::Sobolev { .. } => FamilyKind::Sobolev,
            FamilyRecipe::Oscillatory { .. } => FamilyKind::Oscillatory,
        }
    }

    /// Rebuild the family on a grid.
    pub fn build(&self, grid: Grid) -> Result<FunctionFamily> {
        match self {
            FamilyRecipe::RandomPeetre { levels, a, m, seed } => {
                smoothed_random_family(grid, levels, *a, *m, *seed)
            }
            FamilyRecipe::Deterministic { n, m, k_lo, k_hi } => {
                deterministic_family(grid, *n, *m, *k_lo..=*k_hi)
            }
            FamilyRecipe::Sobolev { n, r, sigma, m, seed, k_cap } => {
                let mode = match k_cap {
                    Some(cap) => SobolevMode::Truncated { k_cap: *cap },
                    None => SobolevMode::Full,
                };
                sobolev_family(grid, *n, *r, *sigma, *m, *seed, mode)
            }
            FamilyRecipe::Oscillatory { l, gamma, p, seed } => {
                oscillatory_family(grid, *l, *gamma, *p, *seed)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    d: u8,
    j: u32,
    kind: String,
    recipe: Option<FamilyRecipe>,
    scales: Vec<f64>,
    bands: Vec<Option<BandLimit>>,
    members: usize,
    payload: bool,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::config(format!("family container: {}", msg.into()))
}

/// Save a family. `recipe`, when given, must produce this family's kind;
/// without a recipe the payload is mandatory (there is no other way to
/// restore the members).
pub fn save_family(
    path: impl AsRef<Path>,
    family: &FunctionFamily,
    recipe: Option<&FamilyRecipe>,
    include_payload: bool,
) -> Result<()> {
    if let Some(r) = recipe {
        if r.kind() != family.kind() {
            return Err(Error::parameter(format!(
                "recipe builds a {} family, got a {} family",
                r.kind().as_str(),
                family.kind().as_str()
            )));
        }
    } else if !include_payload {
        return Err(Error::parameter(
            "a family without a recipe can only be saved with its sample payload".to_string(),
        ));
    }
    let grid = family.grid().ok_or_else(|| {
        Error::parameter("cannot save an empty family: no grid to record".to_string())
    })?;
    let header = Header {
        d: grid.d(),
        j: grid.j(),
        kind: family.kind().as_str().to_string(),
        recipe: recipe.cloned(),
        scales: family.scales().to_vec(),
        bands: family.members().iter().map(|m| m.band_limit()).collect(),
        members: family.len(),
        payload: include_payload,
    };
    let header_bytes = serde_json::to_vec(&header)
        .map_err(|e| Error::construction(format!("header serialization failed: {e}")))?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(header_bytes.len() as u32).to_le_bytes())?;
    out.write_all(&header_bytes)?;
    if include_payload {
        for member in family.members() {
            for s in member.samples() {
                out.write_all(&s.re.to_le_bytes())?;
                out.write_all(&s.im.to_le_bytes())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Load a family saved by [`save_family`]. Files with a payload restore the
/// exact samples; files without one rebuild from the recorded recipe (and
/// cross-check the member count and scales).
pub fn load_family(path: impl AsRef<Path>) -> Result<FunctionFamily> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 10 {
        return Err(malformed("file shorter than the fixed prelude"));
    }
    if &bytes[0..4] != MAGIC {
        return Err(malformed("bad magic (not a family container)"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FORMAT_VERSION {
        return Err(malformed(format!(
            "format version {version} unsupported (this build reads {FORMAT_VERSION})"
        )));
    }
    let header_len = u32::from_le_bytes([bytes[6], bytes[7], bytes[8], bytes[9]]) as usize;
    let body_start = 10 + header_len;
    if bytes.len() < body_start {
        return Err(malformed("truncated header"));
    }
    let header: Header = serde_json::from_slice(&bytes[10..body_start])
        .map_err(|e| malformed(format!("unreadable header: {e}")))?;
    let grid = Grid::new(header.d, header.j)?;
    let kind = FamilyKind::parse(&header.kind)?;
    if header.scales.len() != header.members || header.bands.len() != header.members {
        return Err(malformed("header lengths disagree with the member count"));
    }

    if header.payload {
        let per_member = grid.total() * 16;
        let expected = body_start + header.members * per_member;
        if bytes.len() != expected {
            return Err(malformed(format!(
                "payload holds {} bytes, expected {}",
                bytes.len() - body_start,
                header.members * per_member
            )));
        }
        let mut members = Vec::with_capacity(header.members);
        for k in 0..header.members {
            let start = body_start + k * per_member;
            let samples: Vec<Complex64> = bytes[start..start + per_member]
                .chunks_exact(16)
                .map(|pair| {
                    Complex64::new(
                        f64::from_le_bytes(pair[0..8].try_into().unwrap()),
                        f64::from_le_bytes(pair[8..16].try_into().unwrap()),
                    )
                })
                .collect();
            let mut f = GridFunction::from_samples(grid, samples)?;
            if let Some(band) = header.bands[k] {
                f = f.with_band_limit(band);
            }
            members.push(f);
        }
        return FunctionFamily::new(kind, members, header.scales);
    }

    let recipe = header
        .recipe
        .as_ref()
        .ok_or_else(|| malformed("no payload and no recipe: nothing to restore"))?;
    if recipe.kind() != kind {
        return Err(malformed(format!(
            "header kind {} disagrees with recipe kind {}",
            header.kind,
            recipe.kind().as_str()
        )));
    }
    let family = recipe.build(grid)?;
    if family.len() != header.members || family.scales() != header.scales.as_slice() {
        return Err(malformed(
            "rebuilt family disagrees with the recorded member count or scales",
        ));
    }
    Ok(family)
}

//! Columnar binary cache for preprocessed datasets.
//!
//! Layout (all integers little-endian):
//! magic "IDSB0001", container version u32, schema descriptor text
//! (len-prefixed), encoded flag u8 (+ preprocessor JSON when set), row count
//! u64, feature count u32, labels, then one column block per feature.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use super::dataset::{ColumnVocab, Dataset};
use super::preprocess::Preprocessor;
use super::schema::{ColumnKind, DatasetSchema};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"IDSB0001";
const CACHE_VERSION: u32 = 1;

const TAG_NUMERIC: u8 = 0;
const TAG_CATEGORICAL: u8 = 1;

pub fn save_cache(ds: &Dataset, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;

    let descriptor = ds.schema().to_descriptor_string();
    write_bytes(&mut w, descriptor.as_bytes())?;

    match ds.transform() {
        Some(pre) => {
            w.write_all(&[1u8])?;
            let json = serde_json::to_vec(pre.as_ref())?;
            write_bytes(&mut w, &json)?;
        }
        None => w.write_all(&[0u8])?,
    }

    let n_rows = ds.n_rows();
    let n_features = ds.n_features();
    w.write_all(&(n_rows as u64).to_le_bytes())?;
    w.write_all(&(n_features as u32).to_le_bytes())?;
    w.write_all(ds.labels())?;

    let kinds = ds.feature_kinds();
    for col in 0..n_features {
        // Encoded datasets hold final numeric features in every column.
        let categorical = !ds.is_encoded() && kinds[col] == ColumnKind::Categorical;
        if categorical {
            w.write_all(&[TAG_CATEGORICAL])?;
            let vocab = &ds.vocab()[col];
            w.write_all(&(vocab.len() as u32).to_le_bytes())?;
            for value in vocab.iter() {
                write_bytes(&mut w, value.as_bytes())?;
            }
            for row in ds.rows() {
                w.write_all(&(row[col] as u32).to_le_bytes())?;
            }
        } else {
            w.write_all(&[TAG_NUMERIC])?;
            for row in ds.rows() {
                w.write_all(&row[col].to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<Dataset> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut r = BufReader::new(std::fs::File::open(path)?);

    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)
        .map_err(|_| bad("truncated magic"))?;
    if &magic != CACHE_MAGIC {
        return Err(bad("wrong magic"));
    }
    let version = read_u32(&mut r)?;
    if version != CACHE_VERSION {
        return Err(bad(&format!("unsupported cache version {version}")));
    }

    let descriptor = String::from_utf8(read_bytes(&mut r)?).map_err(|_| bad("descriptor utf8"))?;
    let schema = DatasetSchema::from_descriptor_str(&descriptor)?;

    let mut flag = [0u8; 1];
    r.read_exact(&mut flag).map_err(|_| bad("truncated flag"))?;
    let preprocessor = if flag[0] == 1 {
        let json = read_bytes(&mut r)?;
        let mut pre: Preprocessor = serde_json::from_slice(&json)?;
        pre.rebuild_lookup();
        Some(Arc::new(pre))
    } else {
        None
    };

    let n_rows = read_u64(&mut r)? as usize;
    let n_features = read_u32(&mut r)? as usize;
    if n_features != schema.feature_count() {
        return Err(bad("feature count does not match schema"));
    }
    let mut labels = vec![0u8; n_rows];
    r.read_exact(&mut labels)
        .map_err(|_| bad("truncated labels"))?;
    if labels.iter().any(|&l| l > 1) {
        return Err(bad("labels must be 0/1"));
    }

    let mut rows = vec![vec![0f64; n_features]; n_rows];
    let mut vocab = vec![ColumnVocab::default(); n_features];
    for col in 0..n_features {
        let mut tag = [0u8; 1];
        r.read_exact(&mut tag)
            .map_err(|_| bad("truncated column tag"))?;
        match tag[0] {
            TAG_NUMERIC => {
                for row in rows.iter_mut() {
                    let mut buf = [0u8; 8];
                    r.read_exact(&mut buf)
                        .map_err(|_| bad("truncated column"))?;
                    row[col] = f64::from_le_bytes(buf);
                }
            }
            TAG_CATEGORICAL => {
                let vocab_len = read_u32(&mut r)? as usize;
                for _ in 0..vocab_len {
                    let value =
                        String::from_utf8(read_bytes(&mut r)?).map_err(|_| bad("vocab utf8"))?;
                    vocab[col].intern(&value);
                }
                for row in rows.iter_mut() {
                    let id = read_u32(&mut r)?;
                    if id as usize >= vocab_len {
                        return Err(bad("categorical id out of vocab range"));
                    }
                    row[col] = f64::from(id);
                }
            }
            t => return Err(bad(&format!("unknown column tag {t}"))),
        }
    }

    let ds = Dataset::new(Arc::new(schema), rows, labels, Arc::new(vocab));
    Ok(match preprocessor {
        Some(pre) => ds.with_transform(pre),
        None => ds,
    })
}

fn bad(msg: &str) -> Error {
    Error::BadCacheFile(msg.to_string())
}

fn write_bytes<W: Write>(w: &mut W, bytes: &[u8]) -> Result<()> {
    w.write_all(&(bytes.len() as u32).to_le_bytes())?;
    w.write_all(bytes)?;
    Ok(())
}

fn read_bytes<R: Read>(r: &mut R) -> Result<Vec<u8>> {
    let len = read_u32(r)? as usize;
    if len > 1 << 30 {
        return Err(bad("implausible block length"));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(|_| bad("truncated block"))?;
    Ok(buf)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| bad("truncated u32"))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(|_| bad("truncated u64"))?;
    Ok(u64::from_le_bytes(buf))
}

//! Key files: raw little-endian `u64` keys, no header.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::item::Key;

#[derive(Debug, Error)]
pub enum KeyFileError {
    #[error("key file is {0} bytes, not a multiple of 8")]
    Misaligned(u64),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_key_file(path: impl AsRef<Path>, keys: &[Key]) -> io::Result<()> {
    let mut bytes = Vec::with_capacity(keys.len() * 8);
    for k in keys {
        bytes.extend_from_slice(&k.to_le_bytes());
    }
    fs::write(path, bytes)
}

pub fn read_key_file(path: impl AsRef<Path>) -> Result<Vec<Key>, KeyFileError> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(KeyFileError::Misaligned(bytes.len() as u64));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use quadtwist::modsym::ModSymSpace;
use quadtwist::Result;
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "MODSYM_CACHE_DIR";
const MAGIC: &[u8; 4] = b"QTMS";
/// Bump when the serialized layout of spaces changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    format: u32,
    package: String,
    space: ModSymSpace,
}

fn path_for(level: u64) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| PathBuf::from(dir).join(format!("space-{level}.bin")))
}

fn read(path: &PathBuf, level: u64) -> Option<ModSymSpace> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return None;
    }
    let entry: Entry = bincode::deserialize(&bytes[MAGIC.len()..]).ok()?;
    if entry.format != FORMAT_VERSION
        || entry.package != env!("CARGO_PKG_VERSION")
        || entry.space.level() != level
    {
        log::info!("discarding stale cache entry {}", path.display());
        return None;
    }
    Some(entry.space)
}

fn write(path: &PathBuf, space: &ModSymSpace) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let entry = Entry {
        format: FORMAT_VERSION,
        package: env!("CARGO_PKG_VERSION").to_string(),
        space: space.clone(),
    };
    let body = bincode::serialize(&entry).map_err(std::io::Error::other)?;
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(MAGIC)?;
    f.write_all(&body)?;
    drop(f);
    fs::rename(tmp, path)
}

/// The space at `level`, read from MODSYM_CACHE_DIR when a current entry exists.
pub fn load_space(level: u64) -> Result<ModSymSpace> {
    let Some(path) = path_for(level) else {
        return ModSymSpace::build(level);
    };
    if let Some(space) = read(&path, level) {
        log::info!("loaded level {level} from {}", path.display());
        return Ok(space);
    }
    let space = ModSymSpace::build(level)?;
    if let Err(e) = write(&path, &space) {
        log::warn!("could not write cache {}: {e}", path.display());
    }
    Ok(space)
}

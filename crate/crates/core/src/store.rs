//! File-backed content-addressable store keyed by digests.
//!
//! Layout under the root: `<d[0..2]>/<d[2..]>.bin` holds a payload and
//! `<d[0..2]>/<d[2..]>.alias` holds one target digest plus `\n`. The
//! fan-out name `..` is written as `__`, which no digest can start with.
//!
//! Writers create a private temporary file and publish it with a hard link,
//! which fails instead of replacing an existing entry, so readers see
//! either nothing or a complete payload.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::codec::decode;
use crate::error::{Error, Result};
use crate::group::GroupParams;

const ENTRY_SUFFIX: &str = ".bin";
const ALIAS_SUFFIX: &str = ".alias";

#[derive(Clone, Debug)]
pub struct Store {
    root: PathBuf,
    params: GroupParams,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Store {
    /// Opens (creating if needed) a store rooted at `root` for digests of
    /// `params`.
    pub fn open(root: impl Into<PathBuf>, params: GroupParams) -> Result<Self> {
        let root = root.into();
        if params.version().is_none() {
            return Err(Error::NoDigestSupport(params.name()));
        }
        fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        Ok(Store { root, params })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    fn path(&self, digest: &str, suffix: &str) -> Result<PathBuf> {
        decode(digest, self.params)?;
        let (fan, rest) = digest.split_at(2);
        let fan = if fan == ".." { "__" } else { fan };
        Ok(self.root.join(fan).join(format!("{rest}{suffix}")))
    }

    /// Writes `bytes` to `path` unless it already exists. Returns the bytes
    /// found there when it did.
    fn publish(&self, path: &Path, bytes: &[u8]) -> Result<Option<Vec<u8>>> {
        match fs::read(path) {
            Ok(existing) => return Ok(Some(existing)),
            Err(e) if e.kind() == ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(path, e)),
        }
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let tmp = dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()
        };
        if let Err(e) = write() {
            let _ = fs::remove_file(&tmp);
            return Err(Error::io(&tmp, e));
        }
        let linked = fs::hard_link(&tmp, path);
        let _ = fs::remove_file(&tmp);
        match linked {
            Ok(()) => Ok(None),
            // Lost a race with another writer.
            Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                fs::read(path).map(Some).map_err(|e| Error::io(path, e))
            }
            Err(e) => Err(Error::io(path, e)),
        }
    }

    /// Stores `payload` under `digest`. Storing the same payload again is a
    /// no-op; a different payload is a [`Error::ContentConflict`].
    pub fn put(&self, digest: &str, payload: &[u8]) -> Result<()> {
        let path = self.path(digest, ENTRY_SUFFIX)?;
        match self.publish(&path, payload)? {
            Some(existing) if existing != payload => Err(Error::ContentConflict(digest.to_owned())),
            _ => Ok(()),
        }
    }

    pub fn get(&self, digest: &str) -> Result<Vec<u8>> {
        let path = self.path(digest, ENTRY_SUFFIX)?;
        fs::read(&path).map_err(|e| match e.kind() {
            ErrorKind::NotFound => Error::NotFound(digest.to_owned()),
            _ => Error::io(&path, e),
        })
    }

    pub fn has(&self, digest: &str) -> Result<bool> {
        Ok(self.path(digest, ENTRY_SUFFIX)?.is_file())
    }

    fn read_alias(&self, digest: &str) -> Result<Option<String>> {
        let path = self.path(digest, ALIAS_SUFFIX)?;
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(text.trim_end_matches('\n').to_owned())),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    /// All `(from, to)` alias records, sorted by `from`.
    pub fn aliases(&self) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.root) {
            Ok(it) => it,
            Err(e) => return Err(Error::io(&self.root, e)),
        };
        for fan in entries {
            let fan = fan.map_err(|e| Error::io(&self.root, e))?;
            let fan_name = fan.file_name().to_string_lossy().into_owned();
            let prefix = if fan_name == "__" { ".." } else { fan_name.as_str() };
            let Ok(files) = fs::read_dir(fan.path()) else {
                continue;
            };
            for file in files {
                let file = file.map_err(|e| Error::io(fan.path(), e))?;
                let name = file.file_name().to_string_lossy().into_owned();
                if let Some(rest) = name.strip_suffix(ALIAS_SUFFIX) {
                    let from = format!("{prefix}{rest}");
                    if let Some(to) = self.read_alias(&from)? {
                        out.push((from, to));
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Records that `from` is another identity of `to`. Only one level of
    /// indirection is allowed: `to` may not itself be an alias and `from`
    /// may not already be an alias target.
    pub fn alias_put(&self, from: &str, to: &str) -> Result<()> {
        let path = self.path(from, ALIAS_SUFFIX)?;
        decode(to, self.params)?;
        if from == to {
            return Err(Error::AliasRejected(format!("{from} aliases itself")));
        }
        if self.read_alias(to)?.is_some() {
            return Err(Error::AliasRejected(format!("{to} is itself an alias")));
        }
        if self.aliases()?.iter().any(|(_, t)| t == from) {
            return Err(Error::AliasRejected(format!("{from} is an alias target")));
        }
        match self.publish(&path, format!("{to}\n").as_bytes())? {
            Some(existing) if existing != format!("{to}\n").as_bytes() => Err(
                Error::AliasRejected(format!("{from} already aliases another digest")),
            ),
            _ => Ok(()),
        }
    }

    /// Follows at most one alias; unaliased digests resolve to themselves.
    pub fn resolve(&self, digest: &str) -> Result<String> {
        Ok(self.read_alias(digest)?.unwrap_or_else(|| digest.to_owned()))
    }
}

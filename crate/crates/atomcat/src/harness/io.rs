use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::Error;

/// A named output file held in memory until every artifact of a command exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Artifact {
        Artifact { name: name.into(), contents: contents.into() }
    }

    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Artifact {
        Artifact::new(name, to_json_string(value))
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_json(path, &text)
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Json { path: path.display().to_string(), message: e.to_string() })
}

/// Writes all artifacts into `dir`. Each goes to a temporary name first and
/// the renames happen only once every write succeeded.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, Error> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut staged = Vec::new();
    for a in artifacts {
        let fin = dir.join(&a.name);
        let tmp = dir.join(format!(".{}.partial", a.name));
        if let Err(e) = fs::write(&tmp, &a.contents) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(io_error(&tmp, e));
        }
        staged.push((tmp, fin));
    }
    for (tmp, fin) in &staged {
        fs::rename(tmp, fin).map_err(|e| io_error(fin, e))?;
    }
    Ok(staged.into_iter().map(|(_, f)| f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artifacts_land_together() {
        let dir = std::env::temp_dir().join(format!("atomcat-io-{}", std::process::id()));
        let out = write_artifacts(&dir, &[Artifact::new("a.txt", "x"), Artifact::json("b.json", &vec![1, 2])]).unwrap();
        assert_eq!(out.len(), 2);
        let v: Vec<u32> = read_json(&dir.join("b.json")).unwrap();
        assert_eq!(v, vec![1, 2]);
        assert!(matches!(read_json::<Vec<u32>>(&dir.join("a.txt")), Err(Error::Json { .. })));
        assert!(matches!(read_json::<Vec<u32>>(&dir.join("missing")), Err(Error::Io { .. })));
        fs::remove_dir_all(&dir).unwrap();
    }
}

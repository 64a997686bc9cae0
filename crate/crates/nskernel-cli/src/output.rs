//! Artifact writers. CSV uses comma separation, '.' decimals, one header
//! row and LF line endings; a leading `#` comment line carries the config
//! hash and the truncation certificate so every artifact is traceable to its
//! run. JSON artifacts embed the same fields.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// FNV-1a hash of the canonical (sorted-key) JSON form of the config.
pub fn config_hash(value: &serde_json::Value) -> String {
    let canon = value.to_string();
    let mut h: u64 = 0xcbf29ce484222325;
    for b in canon.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub truncation: u32,
    pub r_eval: f64,
    pub tail_bound: f64,
}

pub struct ArtifactWriter {
    out_dir: PathBuf,
    hash: String,
    certificate: Option<Certificate>,
    written: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(out_dir: &Path, hash: String) -> std::io::Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(ArtifactWriter {
            out_dir: out_dir.to_path_buf(),
            hash,
            certificate: None,
            written: Vec::new(),
        })
    }

    pub fn set_certificate(&mut self, cert: Certificate) {
        self.certificate = Some(cert);
    }

    fn preamble(&self) -> String {
        match &self.certificate {
            Some(c) => format!(
                "# config_hash={} N={} r_eval={} tail_bound={}\n",
                self.hash, c.truncation, c.r_eval, c.tail_bound
            ),
            None => format!("# config_hash={}\n", self.hash),
        }
    }

    pub fn csv(&mut self, name: &str, header: &str, rows: &[String]) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(name);
        let mut f = fs::File::create(&path)?;
        f.write_all(self.preamble().as_bytes())?;
        f.write_all(header.as_bytes())?;
        f.write_all(b"\n")?;
        for row in rows {
            f.write_all(row.as_bytes())?;
            f.write_all(b"\n")?;
        }
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(name);
        let mut doc = serde_json::to_value(value).expect("serializable artifact");
        if let serde_json::Value::Object(map) = &mut doc {
            map.insert("config_hash".into(), serde_json::Value::String(self.hash.clone()));
            if let Some(c) = &self.certificate {
                map.insert(
                    "certificate".into(),
                    serde_json::json!({
                        "N": c.truncation,
                        "r_eval": c.r_eval,
                        "tail_bound": c.tail_bound,
                    }),
                );
            }
        }
        let mut f = fs::File::create(&path)?;
        f.write_all(serde_json::to_string_pretty(&doc).expect("json").as_bytes())?;
        f.write_all(b"\n")?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Shortest-roundtrip float formatting (Rust's default `Display` for f64),
/// which keeps reruns byte-identical.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

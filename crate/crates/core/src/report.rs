//! Deterministic output: JSON with sorted keys and 17 significant digits,
//! order-insensitive input digests, and all-or-nothing file writes.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Pretty JSON formatter that writes every float in `{:.16e}` form.
struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident : $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

/// Serializes `value` to JSON with lexicographically sorted object keys and
/// fixed 17-significant-digit floats, so equal inputs give equal bytes.
pub fn to_deterministic_json<T: Serialize>(value: &T) -> Result<String> {
    // Round-tripping through `Value` sorts struct fields as well as map keys.
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    tree.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// SHA-256 over the header line followed by the data lines in sorted order.
/// Permuting the rows of a CSV file leaves its digest unchanged.
pub fn canonical_digest(text: &str) -> String {
    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or("");
    let mut rows: Vec<&str> = lines.collect();
    rows.sort_unstable();
    let mut hasher = Sha256::new();
    hasher.update(header.as_bytes());
    for row in rows {
        hasher.update(b"\n");
        hasher.update(row.as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Replaces `path` with `content` atomically: readers see either the old
/// file or the complete new one.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(content).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Plain decimal rendering for CSV cells; the shortest string that round-trips.
pub fn csv_number(v: f64) -> String {
    format!("{v}")
}

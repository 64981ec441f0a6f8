//! Versioned, line-oriented decoration files. Field order is fixed so files
//! are diffable; floats are written in shortest round-trip form, so reading
//! a file back reproduces every distance bit for bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ulam_core::UlamAddress;

use crate::{make_block, BlockSpec, Decoration, GlueError};

const FORMAT_VERSION: u32 = 1;

/// Writes a decoration in the versioned line format.
pub fn write_decoration<W: Write>(decoration: &Decoration, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "format decoration {FORMAT_VERSION}")?;
    writeln!(out, "blocks {}", decoration.block_count())?;
    for (address, block) in decoration.blocks() {
        writeln!(out, "block")?;
        writeln!(out, "address={address}")?;
        let kind = if block.is_graph() { "graph" } else { "matrix" };
        writeln!(out, "kind {kind}")?;
        writeln!(out, "points {}", block.points())?;
        writeln!(out, "root {}", block.root())?;
        write!(out, "attach")?;
        for a in block.attach_list() {
            write!(out, " {a}")?;
        }
        writeln!(out)?;
        match block.masses() {
            None => writeln!(out, "masses none")?,
            Some(masses) => {
                write!(out, "masses")?;
                for m in masses {
                    write!(out, " {m}")?;
                }
                writeln!(out)?;
            }
        }
        if let Some(edges) = block.edges() {
            writeln!(out, "edges {}", edges.len())?;
            for (i, j, w) in edges {
                writeln!(out, "{i} {j} {w}")?;
            }
        } else {
            writeln!(out, "matrix")?;
            for row in block.matrix_rows() {
                let mut first = true;
                for d in row {
                    if !first {
                        write!(out, " ")?;
                    }
                    write!(out, "{d}")?;
                    first = false;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

struct LineReader<R: BufRead> {
    inner: R,
    line: usize,
}

impl<R: BufRead> LineReader<R> {
    fn next_line(&mut self) -> Result<String, GlueError> {
        let mut buf = String::new();
        let n = self
            .inner
            .read_line(&mut buf)
            .map_err(|e| self.err(e.to_string()))?;
        if n == 0 {
            return Err(self.err("unexpected end of file".to_owned()));
        }
        self.line += 1;
        while buf.ends_with('\n') || buf.ends_with('\r') {
            buf.pop();
        }
        Ok(buf)
    }

    fn err(&self, reason: String) -> GlueError {
        GlueError::Format {
            line: self.line,
            reason,
        }
    }

    fn expect_keyword<'a>(&self, line: &'a str, keyword: &str) -> Result<&'a str, GlueError> {
        if line == keyword {
            return Ok("");
        }
        line.strip_prefix(keyword)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| self.err(format!("expected `{keyword} ...`, found {line:?}")))
    }

    fn parse_all<T: std::str::FromStr>(&self, text: &str, what: &str) -> Result<Vec<T>, GlueError> {
        text.split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| self.err(format!("cannot parse {what} from {tok:?}")))
            })
            .collect()
    }
}

/// Reads a decoration written by [`write_decoration`], re-validating every
/// block.
pub fn read_decoration<R: BufRead>(input: R) -> Result<Decoration, GlueError> {
    let mut reader = LineReader {
        inner: input,
        line: 0,
    };
    let header = reader.next_line()?;
    let version = reader.expect_keyword(&header, "format decoration")?;
    if version.trim() != FORMAT_VERSION.to_string() {
        return Err(reader.err(format!("unsupported format version {version:?}")));
    }
    let counts = reader.next_line()?;
    let block_count: usize = reader
        .expect_keyword(&counts, "blocks")?
        .trim()
        .parse()
        .map_err(|_| reader.err("cannot parse block count".to_owned()))?;

    let mut blocks = BTreeMap::new();
    for _ in 0..block_count {
        let marker = reader.next_line()?;
        if marker != "block" {
            return Err(reader.err(format!("expected `block`, found {marker:?}")));
        }
        let address_line = reader.next_line()?;
        let address_text = address_line
            .strip_prefix("address=")
            .ok_or_else(|| reader.err(format!("expected `address=...`, found {address_line:?}")))?;
        let address: UlamAddress = address_text
            .parse()
            .map_err(|e| reader.err(format!("{e}")))?;

        let kind_line = reader.next_line()?;
        let kind = reader.expect_keyword(&kind_line, "kind")?.to_owned();
        if kind != "graph" && kind != "matrix" {
            return Err(reader.err(format!("unknown block kind {kind:?}")));
        }
        let points_line = reader.next_line()?;
        let points: usize = reader
            .expect_keyword(&points_line, "points")?
            .trim()
            .parse()
            .map_err(|_| reader.err("cannot parse point count".to_owned()))?;
        let root_line = reader.next_line()?;
        let root: usize = reader
            .expect_keyword(&root_line, "root")?
            .trim()
            .parse()
            .map_err(|_| reader.err("cannot parse root index".to_owned()))?;
        let attach_line = reader.next_line()?;
        let attach: Vec<usize> =
            reader.parse_all(reader.expect_keyword(&attach_line, "attach")?, "attach index")?;
        let masses_line = reader.next_line()?;
        let masses_text = reader.expect_keyword(&masses_line, "masses")?;
        let masses = if masses_text.trim() == "none" {
            None
        } else {
            Some(reader.parse_all(masses_text, "mass")?)
        };

        let block = match kind.as_str() {
            "graph" => {
                let edges_line = reader.next_line()?;
                let edge_count: usize = reader
                    .expect_keyword(&edges_line, "edges")?
                    .trim()
                    .parse()
                    .map_err(|_| reader.err("cannot parse edge count".to_owned()))?;
                let mut edges = Vec::with_capacity(edge_count);
                for _ in 0..edge_count {
                    let line = reader.next_line()?;
                    let mut parts = line.split_whitespace();
                    let parse_idx = |tok: Option<&str>| -> Result<usize, GlueError> {
                        tok.ok_or_else(|| reader.err("short edge line".to_owned()))?
                            .parse()
                            .map_err(|_| reader.err("cannot parse edge endpoint".to_owned()))
                    };
                    let i = parse_idx(parts.next())?;
                    let j = parse_idx(parts.next())?;
                    let w: f64 = parts
                        .next()
                        .ok_or_else(|| reader.err("short edge line".to_owned()))?
                        .parse()
                        .map_err(|_| reader.err("cannot parse edge weight".to_owned()))?;
                    edges.push((i, j, w));
                }
                make_block(BlockSpec::Graph {
                    points,
                    root,
                    attach,
                    masses,
                    edges,
                })?
            }
            "matrix" => {
                let marker = reader.next_line()?;
                if marker != "matrix" {
                    return Err(reader.err(format!("expected `matrix`, found {marker:?}")));
                }
                let mut rows = Vec::with_capacity(points);
                for _ in 0..points {
                    let line = reader.next_line()?;
                    let row: Vec<f64> = reader.parse_all(&line, "matrix entry")?;
                    if row.len() != points {
                        return Err(reader.err(format!(
                            "matrix row has {} entries, expected {points}",
                            row.len()
                        )));
                    }
                    rows.push(row);
                }
                make_block(BlockSpec::Matrix {
                    root,
                    attach,
                    masses,
                    rows,
                })?
            }
            _ => unreachable!("kind validated above"),
        };
        if blocks.insert(address.clone(), block).is_some() {
            return Err(reader.err(format!("duplicate block address {address:?}")));
        }
    }
    Decoration::new(blocks)
}

/// Writes a decoration to a file.
pub fn save_decoration<P: AsRef<Path>>(decoration: &Decoration, path: P) -> Result<(), GlueError> {
    let file = File::create(path).map_err(|e| GlueError::Format {
        line: 0,
        reason: e.to_string(),
    })?;
    let mut writer = BufWriter::new(file);
    write_decoration(decoration, &mut writer).map_err(|e| GlueError::Format {
        line: 0,
        reason: e.to_string(),
    })
}

/// Reads a decoration from a file.
pub fn load_decoration<P: AsRef<Path>>(path: P) -> Result<Decoration, GlueError> {
    let file = File::open(path).map_err(|e| GlueError::Format {
        line: 0,
        reason: e.to_string(),
    })?;
    read_decoration(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    fn sample_decoration() -> Decoration {
        let mut blocks = BTreeMap::new();
        blocks.insert(
            UlamAddress::root(),
            make_block(BlockSpec::Graph {
                points: 3,
                root: 0,
                attach: vec![1, 2],
                masses: Some(vec![0.5, 0.25, 0.25]),
                edges: vec![(0, 1, 0.1), (1, 2, 0.7320508075688772)],
            })
            .unwrap(),
        );
        blocks.insert(
            addr("2"),
            make_block(BlockSpec::Matrix {
                root: 0,
                attach: vec![1],
                masses: None,
                rows: vec![vec![0.0, 1.5], vec![1.5, 0.0]],
            })
            .unwrap(),
        );
        Decoration::new(blocks).unwrap()
    }

    #[test]
    fn round_trip_preserves_structure_and_distances() {
        let dec = sample_decoration();
        let mut buffer = Vec::new();
        write_decoration(&dec, &mut buffer).unwrap();
        let back = read_decoration(buffer.as_slice()).unwrap();
        assert_eq!(back.block_count(), dec.block_count());
        for (address, block) in dec.blocks() {
            let restored = back.block(address).unwrap();
            assert_eq!(restored.points(), block.points());
            assert_eq!(restored.root(), block.root());
            assert_eq!(restored.attach_list(), block.attach_list());
            assert_eq!(restored.masses(), block.masses());
            for i in 0..block.points() {
                for j in 0..block.points() {
                    // Bit-for-bit equality through the text form.
                    assert_eq!(restored.distance(i, j), block.distance(i, j));
                }
            }
        }
    }

    #[test]
    fn writing_is_deterministic() {
        let dec = sample_decoration();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_decoration(&dec, &mut a).unwrap();
        write_decoration(&dec, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_malformed_headers_and_bodies() {
        assert!(matches!(
            read_decoration("nonsense\n".as_bytes()),
            Err(GlueError::Format { line: 1, .. })
        ));
        assert!(matches!(
            read_decoration("format decoration 99\nblocks 0\n".as_bytes()),
            Err(GlueError::Format { line: 1, .. })
        ));
        let truncated = "format decoration 1\nblocks 1\nblock\naddress=\nkind graph\n";
        assert!(read_decoration(truncated.as_bytes()).is_err());
        let bad_kind = "format decoration 1\nblocks 1\nblock\naddress=\nkind fuzzy\npoints 1\nroot 0\nattach\nmasses none\n";
        assert!(read_decoration(bad_kind.as_bytes()).is_err());
    }

    #[test]
    fn validation_runs_on_load() {
        // A matrix violating the triangle inequality must be rejected at
        // read time with the block validator's error.
        let text = "format decoration 1\nblocks 1\nblock\naddress=\nkind matrix\npoints 3\nroot 0\nattach\nmasses none\nmatrix\n0 1 5\n1 0 1\n5 1 0\n";
        assert!(matches!(
            read_decoration(text.as_bytes()),
            Err(GlueError::TriangleViolation { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join("decoration-format-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sample.dec");
        let dec = sample_decoration();
        save_decoration(&dec, &path).unwrap();
        let back = load_decoration(&path).unwrap();
        assert_eq!(back.block_count(), dec.block_count());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

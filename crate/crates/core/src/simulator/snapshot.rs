//! Snapshot files: a short text header, a blank line, then both fields as
//! raw little-endian doubles, row-major, `u` first.

use crate::error::Error;
use crate::simulator::grid::{Field, Grid};
use crate::vec2::Vec2;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &str = "bifront-snapshot 1";

/// Everything needed to interpret the binary payload.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotHeader {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    /// Physical position of cell (0, 0).
    pub origin: Vec2,
    pub time: f64,
    /// Hash of the scenario the run was derived from, if any.
    pub scenario: Option<String>,
}

impl SnapshotHeader {
    pub fn for_grid(grid: &Grid, time: f64, scenario: Option<String>) -> SnapshotHeader {
        SnapshotHeader {
            nx: grid.nx(),
            ny: grid.nx(),
            h: grid.h(),
            origin: Vec2::new(-grid.extent(), -grid.extent()),
            time,
            scenario,
        }
    }

    /// Reconstructs the grid; fails if the snapshot is not symmetric square.
    pub fn grid(&self) -> Option<Grid> {
        if self.nx != self.ny || self.nx % 2 == 0 {
            return None;
        }
        let grid = Grid::centered(((self.nx - 1) / 2) as f64 * self.h, self.h);
        (grid.nx() == self.nx && (grid.extent() + self.origin.x).abs() < 1e-9 * self.h)
            .then_some(grid)
    }
}

pub fn write_snapshot(
    path: &Path,
    header: &SnapshotHeader,
    u: &Field,
    v: &Field,
) -> Result<(), Error> {
    let ctx = || format!("writing snapshot {}", path.display());
    let file = std::fs::File::create(path).map_err(|e| Error::io(ctx(), e))?;
    let mut w = BufWriter::new(file);
    let mut emit = |text: String| w.write_all(text.as_bytes()).map_err(|e| Error::io(ctx(), e));
    emit(format!("{MAGIC}\n"))?;
    emit(format!("nx {}\n", header.nx))?;
    emit(format!("ny {}\n", header.ny))?;
    emit(format!("h {}\n", header.h))?;
    emit(format!("origin {} {}\n", header.origin.x, header.origin.y))?;
    emit(format!("time {}\n", header.time))?;
    if let Some(hash) = &header.scenario {
        emit(format!("scenario {hash}\n"))?;
    }
    emit("fields u v\n\n".to_string())?;
    for field in [u, v] {
        assert_eq!(field.nx(), header.nx, "field does not match header");
        for &value in field.as_slice() {
            w.write_all(&value.to_le_bytes())
                .map_err(|e| Error::io(ctx(), e))?;
        }
    }
    w.flush().map_err(|e| Error::io(ctx(), e))
}

pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Field, Field), Error> {
    let malformed = |message: &str| Error::MalformedSnapshot {
        path: path.display().to_string(),
        message: message.to_string(),
    };
    let file = std::fs::File::open(path)
        .map_err(|e| Error::io(format!("opening snapshot {}", path.display()), e))?;
    let mut reader = BufReader::new(file);

    let mut nx = None;
    let mut ny = None;
    let mut h = None;
    let mut origin = None;
    let mut time = None;
    let mut scenario = None;
    let mut fields_line = None;
    let mut first = true;
    loop {
        let mut line = String::new();
        let n = reader
            .read_line(&mut line)
            .map_err(|e| Error::io(format!("reading snapshot {}", path.display()), e))?;
        if n == 0 {
            return Err(malformed("truncated header"));
        }
        let line = line.trim_end_matches('\n');
        if first {
            if line != MAGIC {
                return Err(malformed("missing magic line"));
            }
            first = false;
            continue;
        }
        if line.is_empty() {
            break;
        }
        let (key, rest) = line.split_once(' ').ok_or_else(|| malformed("bad header line"))?;
        match key {
            "nx" => nx = rest.parse::<usize>().ok(),
            "ny" => ny = rest.parse::<usize>().ok(),
            "h" => h = rest.parse::<f64>().ok(),
            "origin" => {
                let mut it = rest.split(' ').map(str::parse::<f64>);
                match (it.next(), it.next(), it.next()) {
                    (Some(Ok(x)), Some(Ok(y)), None) => origin = Some(Vec2::new(x, y)),
                    _ => return Err(malformed("bad origin line")),
                }
            }
            "time" => time = rest.parse::<f64>().ok(),
            "scenario" => scenario = Some(rest.to_string()),
            "fields" => {
                if rest != "u v" {
                    return Err(malformed("unsupported field order"));
                }
                fields_line = Some(());
            }
            _ => return Err(malformed("unknown header key")),
        }
    }

    let (Some(nx), Some(ny), Some(h), Some(origin), Some(time), Some(())) =
        (nx, ny, h, origin, time, fields_line)
    else {
        return Err(malformed("incomplete header"));
    };
    if nx == 0 || ny == 0 || !(h > 0.0) {
        return Err(malformed("degenerate grid"));
    }

    let count = nx
        .checked_mul(ny)
        .ok_or_else(|| malformed("grid too large"))?;
    let mut payload = Vec::new();
    reader
        .read_to_end(&mut payload)
        .map_err(|e| Error::io(format!("reading snapshot {}", path.display()), e))?;
    if payload.len() != 2 * count * 8 {
        return Err(malformed("payload size does not match grid"));
    }
    let decode = |half: usize| {
        let mut data = Vec::with_capacity(count);
        for i in 0..count {
            let at = (half * count + i) * 8;
            let bytes: [u8; 8] = payload[at..at + 8].try_into().expect("8-byte chunk");
            data.push(f64::from_le_bytes(bytes));
        }
        Field::from_data(nx, data)
    };
    let header = SnapshotHeader {
        nx,
        ny,
        h,
        origin,
        time,
        scenario,
    };
    Ok((header, decode(0), decode(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn roundtrip_preserves_bits() {
        let grid = Grid::centered(2.0, 0.5);
        let mut u = Field::zeros(&grid);
        let mut v = Field::zeros(&grid);
        for iy in 0..grid.nx() {
            for ix in 0..grid.nx() {
                u.set(ix, iy, (ix as f64 * 0.37 + iy as f64).sin());
                v.set(ix, iy, 1.0 / (1.0 + ix as f64 + iy as f64));
            }
        }
        let header = SnapshotHeader::for_grid(&grid, 1.25, Some("abc123".into()));
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.snap");
        write_snapshot(&path, &header, &u, &v).unwrap();
        let (h2, u2, v2) = read_snapshot(&path).unwrap();
        assert_eq!(h2, header);
        assert_eq!(u2, u);
        assert_eq!(v2, v);
        assert_eq!(h2.grid(), Some(grid));
    }

    #[test]
    fn malformed_files_are_reported() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.snap");
        std::fs::write(&path, b"not a snapshot\n\n").unwrap();
        match read_snapshot(&path) {
            Err(Error::MalformedSnapshot { .. }) => {}
            other => panic!("expected malformed error, got {other:?}"),
        }

        let grid = Grid::centered(1.0, 0.5);
        let header = SnapshotHeader::for_grid(&grid, 0.0, None);
        let u = Field::zeros(&grid);
        let v = Field::zeros(&grid);
        let good = dir.path().join("good.snap");
        write_snapshot(&good, &header, &u, &v).unwrap();
        let bytes = std::fs::read(&good).unwrap();
        std::fs::write(&good, &bytes[..bytes.len() - 4]).unwrap();
        match read_snapshot(&good) {
            Err(Error::MalformedSnapshot { message, .. }) => {
                assert!(message.contains("payload"));
            }
            other => panic!("expected malformed error, got {other:?}"),
        }
    }
}

//! On-disk index files.
//!
//! `<prefix>.ebwt` and `<prefix>.ebwt.qs` are raw byte streams of length N
//! ('$' = 0x24, '!' at marker positions in the quality stream). `<prefix>.lcp`
//! starts with one width byte (1 or 4) followed by N little-endian values of
//! that width; the virtual trailing 0 is implicit. `<prefix>.docmap` holds m
//! little-endian u32 read indices, one per '$' occurrence in transform order;
//! it is optional on import, but without it the index cannot drive per-read
//! reconstruction.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use super::{EbwtError, EbwtIndex};

/// Integer width of the stored LCP values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcpWidth {
    One,
    Four,
}

impl LcpWidth {
    fn byte(self) -> u8 {
        match self {
            LcpWidth::One => 1,
            LcpWidth::Four => 4,
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = OsString::from(prefix.as_os_str());
    name.push(suffix);
    PathBuf::from(name)
}

fn encode_lcp(lcp: &[u32], width: LcpWidth) -> Result<Vec<u8>, EbwtError> {
    let mut out = Vec::with_capacity(1 + lcp.len() * width.byte() as usize);
    out.push(width.byte());
    for &value in lcp {
        match width {
            LcpWidth::One => {
                if value > u8::MAX as u32 {
                    return Err(EbwtError::LcpOverflow { value, width: 1 });
                }
                out.push(value as u8);
            }
            LcpWidth::Four => out.extend_from_slice(&value.to_le_bytes()),
        }
    }
    Ok(out)
}

fn decode_lcp(data: &[u8]) -> Result<Vec<u32>, EbwtError> {
    let Some((&width, body)) = data.split_first() else {
        return Err(EbwtError::BadLcpWidth(0));
    };
    let width = match width {
        1 => LcpWidth::One,
        4 => LcpWidth::Four,
        other => return Err(EbwtError::BadLcpWidth(other)),
    };
    let step = width.byte() as usize;
    if body.len() % step != 0 {
        return Err(EbwtError::LcpTruncated {
            bytes: body.len(),
            width: width.byte(),
        });
    }
    Ok(match width {
        LcpWidth::One => body.iter().map(|&b| b as u32).collect(),
        LcpWidth::Four => body
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    })
}

/// Write `<prefix>.ebwt`, `<prefix>.ebwt.qs`, `<prefix>.lcp`, and, when the
/// index carries the end-marker map, `<prefix>.docmap`. The LCP width is
/// picked automatically: one byte when every value fits, four otherwise.
pub fn export_index(index: &EbwtIndex, prefix: &Path) -> Result<(), EbwtError> {
    let width = if index.lcp().iter().all(|&v| v <= u8::MAX as u32) {
        LcpWidth::One
    } else {
        LcpWidth::Four
    };
    export_index_with_width(index, prefix, width)
}

/// [`export_index`] with an explicit LCP width; fails with
/// [`EbwtError::LcpOverflow`] when a value does not fit.
pub fn export_index_with_width(
    index: &EbwtIndex,
    prefix: &Path,
    width: LcpWidth,
) -> Result<(), EbwtError> {
    let lcp_bytes = encode_lcp(index.lcp(), width)?;
    fs::write(with_suffix(prefix, ".ebwt"), index.ebwt())?;
    fs::write(with_suffix(prefix, ".ebwt.qs"), index.qs())?;
    fs::write(with_suffix(prefix, ".lcp"), lcp_bytes)?;
    if let Some(map) = index.dollar_read() {
        let mut bytes = Vec::with_capacity(map.len() * 4);
        for &r in map {
            bytes.extend_from_slice(&r.to_le_bytes());
        }
        fs::write(with_suffix(prefix, ".docmap"), bytes)?;
    }
    Ok(())
}

/// Load an index from its files, rebuilding symbol counts and rank support
/// with a single scan. `<prefix>.docmap` is consulted when present; without
/// it the returned index supports clustering and smoothing but not
/// reconstruction.
pub fn import_index(prefix: &Path) -> Result<EbwtIndex, EbwtError> {
    let ebwt = fs::read(with_suffix(prefix, ".ebwt"))?;
    let qs = fs::read(with_suffix(prefix, ".ebwt.qs"))?;
    let lcp = decode_lcp(&fs::read(with_suffix(prefix, ".lcp"))?)?;

    let docmap_path = with_suffix(prefix, ".docmap");
    let dollar_read = if docmap_path.exists() {
        let bytes = fs::read(docmap_path)?;
        if bytes.len() % 4 != 0 {
            return Err(EbwtError::DocmapMismatch {
                entries: bytes.len() / 4,
                markers: ebwt.iter().filter(|&&b| b == super::SENTINEL).count(),
            });
        }
        Some(
            bytes
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    } else {
        None
    };

    EbwtIndex::from_parts(ebwt, qs, lcp, dollar_read)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{collection_of, worked_example};
    use super::super::{build_index, EbwtError};
    use super::*;

    #[test]
    fn roundtrip_preserves_all_streams() {
        let index = build_index(&worked_example()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("sample");
        export_index(&index, &prefix).unwrap();

        let imported = import_index(&prefix).unwrap();
        assert_eq!(imported.ebwt(), index.ebwt());
        assert_eq!(imported.qs(), index.qs());
        assert_eq!(imported.lcp(), index.lcp());
        assert_eq!(imported.counts(), index.counts());
        assert_eq!(imported.dollar_read(), index.dollar_read());
    }

    #[test]
    fn example_ebwt_file_is_32_bytes() {
        let index = build_index(&worked_example()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("t1");
        export_index(&index, &prefix).unwrap();
        let meta = std::fs::metadata(with_suffix(&prefix, ".ebwt")).unwrap();
        assert_eq!(meta.len(), 32);
    }

    #[test]
    fn narrow_width_overflows_on_large_values() {
        let err = encode_lcp(&[0, 300, 2], LcpWidth::One).unwrap_err();
        assert!(matches!(err, EbwtError::LcpOverflow { value: 300, width: 1 }));
        // Four-byte encoding takes the same values.
        assert!(encode_lcp(&[0, 300, 2], LcpWidth::Four).is_ok());
    }

    #[test]
    fn wide_width_roundtrips() {
        let read = "ACGT".repeat(80);
        let index = build_index(&collection_of(&[&read, &read])).unwrap();
        assert!(index.lcp().iter().any(|&v| v > 255));
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("wide");
        export_index(&index, &prefix).unwrap();
        let imported = import_index(&prefix).unwrap();
        assert_eq!(imported.lcp(), index.lcp());
    }

    #[test]
    fn rejects_unknown_width_byte() {
        assert!(matches!(
            decode_lcp(&[2, 0, 0]),
            Err(EbwtError::BadLcpWidth(2))
        ));
    }

    #[test]
    fn import_without_docmap_loses_read_mapping() {
        let index = build_index(&worked_example()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("nodoc");
        export_index(&index, &prefix).unwrap();
        std::fs::remove_file(with_suffix(&prefix, ".docmap")).unwrap();
        let imported = import_index(&prefix).unwrap();
        assert!(imported.dollar_read().is_none());
        assert_eq!(imported.ebwt(), index.ebwt());
    }

    #[test]
    fn corrupt_quality_bytes_are_rejected() {
        let index = build_index(&worked_example()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("badqs");
        export_index(&index, &prefix).unwrap();
        let qs_path = with_suffix(&prefix, ".ebwt.qs");
        let mut qs = std::fs::read(&qs_path).unwrap();
        qs[5] = 0x07;
        std::fs::write(&qs_path, qs).unwrap();
        assert!(matches!(
            import_index(&prefix),
            Err(EbwtError::BadQuality { pos: 5, byte: 0x07 })
        ));
    }

    #[test]
    fn mismatched_stream_lengths_are_rejected() {
        let index = build_index(&worked_example()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("bad");
        export_index(&index, &prefix).unwrap();
        std::fs::write(with_suffix(&prefix, ".ebwt.qs"), b"short").unwrap();
        assert!(matches!(
            import_index(&prefix),
            Err(EbwtError::LengthMismatch { .. })
        ));
    }
}

use std::fs::File;
use std::io::{ErrorKind, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use crate::alphabet::Alphabet;
use crate::error::SourceError;
use crate::sources::{DecodeMode, DecoderConfig, SymbolSource, ASCII_DIGIT_LIMIT};

/// Opens a file as a symbol source under the given decoder settings.
pub fn decode_file(
    path: impl AsRef<Path>,
    alphabet: Alphabet,
    config: &DecoderConfig,
) -> Result<Box<dyn SymbolSource>, SourceError> {
    let path = path.as_ref();
    match config.mode {
        DecodeMode::RawByte => Ok(Box::new(RawFileSource::open(path, alphabet)?)),
        DecodeMode::AsciiDigit => Ok(Box::new(AsciiFileSource::open(
            path,
            alphabet,
            &config.skip,
        )?)),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> SourceError {
    SourceError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_retrying(path: &Path, file: &mut File, buf: &mut [u8]) -> Result<usize, SourceError> {
    loop {
        match file.read(buf) {
            Ok(n) => return Ok(n),
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(io_error(path, e)),
        }
    }
}

/// A file whose bytes are the symbol values themselves.
///
/// Bytes are passed through unvalidated; out-of-range values are rejected
/// by the counter, which knows the exact stream offset. Symbol offsets
/// coincide with byte offsets, so forking is a plain seek.
pub struct RawFileSource {
    path: PathBuf,
    file: File,
    alphabet: Alphabet,
    len: u64,
    pos: u64,
}

impl RawFileSource {
    pub fn open(path: impl AsRef<Path>, alphabet: Alphabet) -> Result<Self, SourceError> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| io_error(&path, e))?;
        let len = file
            .metadata()
            .map_err(|e| io_error(&path, e))?
            .len();
        Ok(RawFileSource {
            path,
            file,
            alphabet,
            len,
            pos: 0,
        })
    }
}

impl SymbolSource for RawFileSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn known_len(&self) -> Option<u64> {
        Some(self.len.saturating_sub(self.pos))
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        let got = read_retrying(&self.path, &mut self.file, buf)?;
        self.pos += got as u64;
        Ok(got)
    }

    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        let mut file = File::open(&self.path).map_err(|e| io_error(&self.path, e))?;
        file.seek(SeekFrom::Start(offset))
            .map_err(|e| io_error(&self.path, e))?;
        Ok(Some(Box::new(RawFileSource {
            path: self.path.clone(),
            file,
            alphabet: self.alphabet,
            len: self.len,
            pos: offset,
        })))
    }
}

const CLASS_SKIP: u8 = 254;
const CLASS_INVALID: u8 = 255;

/// A text file of ascii digit symbols with a configurable skip set.
///
/// Sequential only: skipped bytes make the symbol-offset to byte-offset
/// map unknowable without a scan, so `fork_at` reports no support. Decode
/// errors carry the byte offset in the file, not the symbol offset.
pub struct AsciiFileSource {
    path: PathBuf,
    file: File,
    alphabet: Alphabet,
    /// Byte value -> symbol value, `CLASS_SKIP`, or `CLASS_INVALID`.
    table: [u8; 256],
    raw: Vec<u8>,
    raw_pos: usize,
    raw_len: usize,
    /// Absolute file offset of `raw[raw_pos]`.
    offset: u64,
}

impl AsciiFileSource {
    pub fn open(
        path: impl AsRef<Path>,
        alphabet: Alphabet,
        skip: &[u8],
    ) -> Result<Self, SourceError> {
        if alphabet.size() > ASCII_DIGIT_LIMIT {
            return Err(SourceError::UnsupportedAlphabet {
                m: alphabet.size(),
                limit: ASCII_DIGIT_LIMIT,
                what: "ascii digit decoding",
            });
        }
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| io_error(&path, e))?;
        Ok(AsciiFileSource {
            path,
            file,
            alphabet,
            table: Self::class_table(alphabet.size(), skip),
            raw: vec![0; 64 * 1024],
            raw_pos: 0,
            raw_len: 0,
            offset: 0,
        })
    }

    fn class_table(m: u32, skip: &[u8]) -> [u8; 256] {
        let mut table = [CLASS_INVALID; 256];
        for v in 0..10u8 {
            table[(b'0' + v) as usize] = v;
        }
        for v in 0..26u8 {
            table[(b'a' + v) as usize] = 10 + v;
            table[(b'A' + v) as usize] = 10 + v;
        }
        for entry in table.iter_mut() {
            if *entry != CLASS_INVALID && *entry as u32 >= m {
                *entry = CLASS_INVALID;
            }
        }
        for &b in skip {
            table[b as usize] = CLASS_SKIP;
        }
        table
    }
}

impl SymbolSource for AsciiFileSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        if buf.is_empty() {
            return Ok(0);
        }
        let mut produced = 0;
        // Skips can swallow a whole raw chunk; keep refilling so that 0
        // produced symbols always means end of file.
        while produced == 0 {
            if self.raw_pos == self.raw_len {
                let raw = &mut self.raw;
                self.raw_len = read_retrying(&self.path, &mut self.file, raw)?;
                self.raw_pos = 0;
                if self.raw_len == 0 {
                    return Ok(0);
                }
            }
            while self.raw_pos < self.raw_len && produced < buf.len() {
                let byte = self.raw[self.raw_pos];
                match self.table[byte as usize] {
                    CLASS_SKIP => {}
                    CLASS_INVALID => {
                        // Position stays on the offending byte.
                        return Err(SourceError::Decode {
                            offset: self.offset,
                            byte,
                            m: self.alphabet.size(),
                            mode: "ascii",
                        });
                    }
                    value => {
                        buf[produced] = value;
                        produced += 1;
                    }
                }
                self.raw_pos += 1;
                self.offset += 1;
            }
        }
        Ok(produced)
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;
    use crate::sources::take_symbols;

    fn alpha(m: u32) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn temp_file(bytes: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(bytes).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn raw_file_reads_bytes() {
        let f = temp_file(&[0, 1, 1, 0, 1]);
        let mut src = decode_file(f.path(), alpha(2), &DecoderConfig::raw()).unwrap();
        assert_eq!(src.known_len(), Some(5));
        assert_eq!(take_symbols(src.as_mut(), 100).unwrap(), vec![0, 1, 1, 0, 1]);
        assert_eq!(src.known_len(), Some(0));
    }

    #[test]
    fn raw_file_forks_by_seeking() {
        let f = temp_file(&[3, 1, 4, 1, 5, 9, 2, 6]);
        let src = decode_file(f.path(), alpha(10), &DecoderConfig::raw()).unwrap();
        let mut fork = src.fork_at(5).unwrap().unwrap();
        assert_eq!(fork.known_len(), Some(3));
        assert_eq!(take_symbols(fork.as_mut(), 100).unwrap(), vec![9, 2, 6]);
    }

    #[test]
    fn raw_file_passes_out_of_range_bytes_through() {
        let f = temp_file(&[0, 9, 1]);
        let mut src = decode_file(f.path(), alpha(2), &DecoderConfig::raw()).unwrap();
        assert_eq!(take_symbols(src.as_mut(), 100).unwrap(), vec![0, 9, 1]);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = decode_file("/nonexistent/xyz", alpha(2), &DecoderConfig::raw())
            .map(|_| ())
            .unwrap_err();
        assert!(matches!(err, SourceError::Io { .. }));
    }

    #[test]
    fn ascii_file_decodes_digits_and_skips_whitespace() {
        let f = temp_file(b"01 10\n1101\t0\r\n");
        let mut src = decode_file(f.path(), alpha(2), &DecoderConfig::ascii()).unwrap();
        assert_eq!(
            take_symbols(src.as_mut(), 100).unwrap(),
            vec![0, 1, 1, 0, 1, 1, 0, 1, 0]
        );
    }

    #[test]
    fn ascii_file_decodes_letter_digits_case_insensitively() {
        let f = temp_file(b"9aAbZ");
        let mut src = decode_file(f.path(), alpha(36), &DecoderConfig::ascii()).unwrap();
        assert_eq!(take_symbols(src.as_mut(), 100).unwrap(), vec![9, 10, 10, 11, 35]);
    }

    #[test]
    fn ascii_file_rejects_out_of_base_digits() {
        let f = temp_file(b"0 1 2 1");
        let mut src = decode_file(f.path(), alpha(2), &DecoderConfig::ascii()).unwrap();
        let mut buf = [0u8; 16];
        let err = src.read_symbols(&mut buf).unwrap_err();
        match err {
            SourceError::Decode { offset, byte, m, mode } => {
                assert_eq!((offset, byte, m, mode), (4, b'2', 2, "ascii"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        // The failed read consumed nothing past the good prefix.
        let retry = src.read_symbols(&mut buf).unwrap_err();
        assert!(matches!(retry, SourceError::Decode { offset: 4, .. }));
    }

    #[test]
    fn ascii_file_reports_no_fork_support() {
        let f = temp_file(b"0101");
        let src = decode_file(f.path(), alpha(2), &DecoderConfig::ascii()).unwrap();
        assert!(src.fork_at(2).unwrap().is_none());
    }

    #[test]
    fn ascii_decoder_caps_the_base() {
        let f = temp_file(b"00");
        let err = decode_file(f.path(), alpha(37), &DecoderConfig::ascii())
            .map(|_| ())
            .unwrap_err();
        assert!(matches!(
            err,
            SourceError::UnsupportedAlphabet { m: 37, limit: 36, .. }
        ));
    }

    #[test]
    fn ascii_skip_only_chunks_do_not_end_the_stream() {
        let mut bytes = vec![b' '; 100_000];
        bytes.push(b'1');
        let f = temp_file(&bytes);
        let mut src = decode_file(f.path(), alpha(2), &DecoderConfig::ascii()).unwrap();
        assert_eq!(take_symbols(src.as_mut(), 100).unwrap(), vec![1]);
    }
}

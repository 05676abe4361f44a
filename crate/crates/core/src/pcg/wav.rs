//! Minimal WAV codec for 16-bit PCM mono files. Anything else is rejected.

use std::io::{Read, Write};

use crate::error::{Error, Result};

fn read_exact_buf<R: Read>(r: &mut R, len: usize, what: &str) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)
        .map_err(|_| Error::Format(format!("wav: truncated {what}")))?;
    Ok(buf)
}

fn u16_le(b: &[u8]) -> u16 {
    u16::from_le_bytes([b[0], b[1]])
}

fn u32_le(b: &[u8]) -> u32 {
    u32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

/// Read a 16-bit PCM mono WAV stream; returns samples scaled to
/// `[-1, 1)` and the sample rate in Hz.
pub fn read_wav_mono16<R: Read>(r: &mut R) -> Result<(Vec<f64>, u32)> {
    let header = read_exact_buf(r, 12, "RIFF header")?;
    if &header[0..4] != b"RIFF" || &header[8..12] != b"WAVE" {
        return Err(Error::Format("wav: not a RIFF/WAVE file".to_string()));
    }
    let mut format: Option<(u16, u16, u32, u16)> = None;
    loop {
        let mut chunk_header = [0u8; 8];
        match r.read_exact(&mut chunk_header) {
            Ok(()) => {}
            Err(_) => return Err(Error::Format("wav: missing data chunk".to_string())),
        }
        let id = &chunk_header[0..4];
        let len = u32_le(&chunk_header[4..8]) as usize;
        if id == b"fmt " {
            if len < 16 {
                return Err(Error::Format("wav: fmt chunk too short".to_string()));
            }
            let body = read_exact_buf(r, len + (len & 1), "fmt chunk")?;
            format = Some((u16_le(&body[0..2]), u16_le(&body[2..4]), u32_le(&body[4..8]), u16_le(&body[14..16])));
        } else if id == b"data" {
            let Some((audio_format, channels, rate, bits)) = format else {
                return Err(Error::Format("wav: data chunk before fmt".to_string()));
            };
            if audio_format != 1 {
                return Err(Error::Format(format!(
                    "wav: only PCM supported, got format tag {audio_format}"
                )));
            }
            if channels != 1 {
                return Err(Error::Format(format!(
                    "wav: only mono supported, got {channels} channels"
                )));
            }
            if bits != 16 {
                return Err(Error::Format(format!(
                    "wav: only 16-bit supported, got {bits} bits"
                )));
            }
            if len % 2 != 0 {
                return Err(Error::Format("wav: odd data chunk length".to_string()));
            }
            let body = read_exact_buf(r, len, "data chunk")?;
            let samples = body
                .chunks_exact(2)
                .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / 32768.0)
                .collect();
            return Ok((samples, rate));
        } else {
            // Skip unknown chunks (word aligned).
            read_exact_buf(r, len + (len & 1), "chunk body")?;
        }
    }
}

/// Write samples as a 16-bit PCM mono WAV stream; values are clamped to
/// `[-1, 1 - 1/32768]`.
pub fn write_wav_mono16<W: Write>(w: &mut W, samples: &[f64], rate: u32) -> Result<()> {
    let data_len = samples.len() * 2;
    let riff_len = 36 + data_len;
    w.write_all(b"RIFF")?;
    w.write_all(&(riff_len as u32).to_le_bytes())?;
    w.write_all(b"WAVE")?;
    w.write_all(b"fmt ")?;
    w.write_all(&16u32.to_le_bytes())?;
    w.write_all(&1u16.to_le_bytes())?; // PCM
    w.write_all(&1u16.to_le_bytes())?; // mono
    w.write_all(&rate.to_le_bytes())?;
    w.write_all(&(rate * 2).to_le_bytes())?; // byte rate
    w.write_all(&2u16.to_le_bytes())?; // block align
    w.write_all(&16u16.to_le_bytes())?;
    w.write_all(b"data")?;
    w.write_all(&(data_len as u32).to_le_bytes())?;
    for &s in samples {
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_all(&q.to_le_bytes())?;
    }
    Ok(())
}

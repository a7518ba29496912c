//! Event stream decoding and piecewise-linear waveform reconstruction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::EventStream;
use crate::signal::UniformSignal;

/// A decoded event at its absolute sample index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorPoint {
    pub t_index: u64,
    pub v: f64,
}

/// Accumulates timestamps into absolute indices and dequantizes the codes.
pub fn decode_anchors(stream: &EventStream) -> Result<Vec<AnchorPoint>> {
    let adc = stream.config().adc();
    let mut t: u64 = 0;
    let mut anchors: Vec<AnchorPoint> = Vec::with_capacity(stream.len());
    for (j, ev) in stream.events().iter().enumerate() {
        t = t
            .checked_add(ev.dt_cycles)
            .ok_or_else(|| Error::CorruptStream(format!("event {j}: time overflow")))?;
        if let Some(prev) = anchors.last() {
            if t <= prev.t_index {
                return Err(Error::CorruptStream(format!(
                    "event {j}: time {t} does not advance past {}",
                    prev.t_index
                )));
            }
        }
        anchors.push(AnchorPoint {
            t_index: t,
            v: adc.dequantize(ev.code)?,
        });
    }
    Ok(anchors)
}

/// Straight lines between consecutive anchors, evaluated at every index;
/// the end values are held outside the anchor span.
pub fn pwl_reconstruct(
    anchors: &[AnchorPoint],
    total_samples: u64,
    fs_hz: f64,
) -> Result<UniformSignal> {
    let (first, last) = match (anchors.first(), anchors.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(Error::NoAnchors),
    };
    if last.t_index >= total_samples {
        return Err(Error::InvalidArgument(format!(
            "anchor at index {} lies beyond {total_samples} samples",
            last.t_index
        )));
    }
    if anchors.windows(2).any(|w| w[1].t_index <= w[0].t_index) {
        return Err(Error::InvalidArgument(
            "anchor indices must strictly increase".into(),
        ));
    }

    let n = total_samples as usize;
    let mut out = Vec::with_capacity(n);
    out.resize(first.t_index as usize, first.v);
    for w in anchors.windows(2) {
        let (a, b) = (w[0], w[1]);
        let span = (b.t_index - a.t_index) as f64;
        for t in a.t_index..b.t_index {
            let frac = (t - a.t_index) as f64 / span;
            out.push(a.v + (b.v - a.v) * frac);
        }
    }
    out.resize(n, last.v);
    UniformSignal::new(fs_hz, out)
}

/// Decodes and reconstructs in one go, at the stream's own rate and length.
pub fn reconstruct_stream(stream: &EventStream) -> Result<UniformSignal> {
    let anchors = decode_anchors(stream)?;
    pwl_reconstruct(&anchors, stream.total_samples(), stream.fs_hz())
}

/// Root-mean-square difference between two traces of equal length and rate.
///
/// Reconstruction error is measured against the raw analog input, so it
/// includes the converter's own quantization error.
pub fn rms_error(original: &UniformSignal, reconstructed: &UniformSignal) -> Result<f64> {
    if original.len() != reconstructed.len() {
        return Err(Error::LengthMismatch {
            original: original.len(),
            other: reconstructed.len(),
        });
    }
    if original.fs_hz() != reconstructed.fs_hz() {
        return Err(Error::RateMismatch {
            original: original.fs_hz(),
            other: reconstructed.fs_hz(),
        });
    }
    if original.is_empty() {
        return Err(Error::EmptySignal);
    }
    let sum_sq: f64 = original
        .samples()
        .iter()
        .zip(reconstructed.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((sum_sq / original.len() as f64).sqrt())
}

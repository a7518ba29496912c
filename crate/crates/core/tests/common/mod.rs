//! Test-only reference models, written straight from the sampler rules and
//! sharing no code with the library's state machine.

#![allow(dead_code)]

/// Plain-loop replay of the predictive sampler. Returns `(t_index, code)`
/// for every emitted conversion and the number of SAR conversions.
pub struct Replay {
    pub emitted: Vec<(u64, u32)>,
    pub conversions: u64,
    pub track_steps: u64,
    pub track_failures: u64,
}

pub fn replay(
    samples: &[f64],
    bits: u32,
    v_min: f64,
    v_max: f64,
    delta_volts: f64,
    ts_bits: u32,
) -> Replay {
    let levels = 2f64.powi(bits as i32);
    let lsb = (v_max - v_min) / levels;
    let top = levels as i64 - 1;
    let quant = |v: f64| -> i64 {
        let x = ((v - v_min) / lsb).round();
        if x.is_nan() || x < 0.0 {
            0
        } else {
            (x as i64).min(top)
        }
    };
    let volts = |c: i64| v_min + c as f64 * lsb;
    let delta = ((delta_volts / lsb).round() as i64).max(1);
    let max_dt = (1i64 << ts_bits) - 1;

    let mut out = Replay {
        emitted: vec![],
        conversions: 0,
        track_steps: 0,
        track_failures: 0,
    };
    let mut last_emit: i64 = 0;
    let (mut l1, mut l2) = (0i64, 0i64);
    let mut i = 0usize;
    // Start-up pair.
    if i < samples.len() {
        l1 = quant(samples[i]);
        out.conversions += 1;
        out.emitted.push((0, l1 as u32));
        i += 1;
    }
    let mut convert_next = true;
    while i < samples.len() {
        if convert_next {
            l2 = l1;
            l1 = quant(samples[i]);
            out.conversions += 1;
            out.emitted.push((i as u64, l1 as u32));
            last_emit = i as i64;
            convert_next = false;
        } else {
            out.track_steps += 1;
            let p = (2 * l1 - l2).clamp(0, top);
            let ut = (p + delta).clamp(0, top);
            let lt = (p - delta).clamp(0, top);
            let v = samples[i];
            let inside = volts(lt) < v && v < volts(ut);
            // Keep tracking only while a miss on the following sample could
            // still be emitted (at i + 2) with an encodable timestamp.
            let fits = (i as i64 + 2 - last_emit) <= max_dt;
            if inside && fits {
                l2 = l1;
                l1 = p;
            } else {
                out.track_failures += 1;
                l2 = l1;
                l1 = quant(v);
                out.conversions += 1;
                convert_next = true;
            }
        }
        i += 1;
    }
    out
}

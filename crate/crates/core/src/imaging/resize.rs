use super::buffer::{store_u8, ImageBuffer};
use crate::error::{Error, Result};

/// One output sample along an axis: two source taps and the weight of the second.
#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

/// Pixel-center aligned taps: source = (i + 0.5) * in/out - 0.5, clamped to the edge.
fn axis_taps(in_len: u32, out_len: u32) -> Vec<Tap> {
    let scale = in_len as f64 / out_len as f64;
    let last = (in_len - 1) as f64;
    (0..out_len)
        .map(|i| {
            let s = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(in_len as usize - 1);
            Tap {
                lo,
                hi,
                frac: s - lo as f64,
            }
        })
        .collect()
}

/// Bilinear resize with edge clamping and pixel-center alignment.
pub fn resize_bilinear(img: &ImageBuffer, out_w: u32, out_h: u32) -> Result<ImageBuffer> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::invalid(format!(
            "resize target must be at least 1x1, got {out_w}x{out_h}"
        )));
    }
    if img.dimensions() == (out_w, out_h) {
        return Ok(img.clone());
    }
    let xs = axis_taps(img.width(), out_w);
    let ys = axis_taps(img.height(), out_h);
    let c = img.channels();
    let src = img.data();
    let stride = img.width() as usize * c;
    let row_len = out_w as usize * c;
    let mut out = vec![0u8; row_len * out_h as usize];
    // horizontal pass per source row is shared by every output row using it
    let mut cache: [(usize, Vec<f64>); 2] = [(usize::MAX, vec![0.0; row_len]), (usize::MAX, vec![0.0; row_len])];
    let horizontal = |y: usize, buf: &mut Vec<f64>| {
        let row = &src[y * stride..(y + 1) * stride];
        for (x, tx) in xs.iter().enumerate() {
            let (a, b) = (tx.lo * c, tx.hi * c);
            for ch in 0..c {
                let p0 = row[a + ch] as f64;
                let p1 = row[b + ch] as f64;
                buf[x * c + ch] = p0 + (p1 - p0) * tx.frac;
            }
        }
    };
    for (oy, ty) in ys.iter().enumerate() {
        for (slot, y) in [(0, ty.lo), (1, ty.hi)] {
            if cache[slot].0 != y {
                let other = 1 - slot;
                if cache[other].0 == y {
                    let v = cache[other].1.clone();
                    cache[slot] = (y, v);
                } else {
                    horizontal(y, &mut cache[slot].1);
                    cache[slot].0 = y;
                }
            }
        }
        let (top, bottom) = (&cache[0].1, &cache[1].1);
        let dst = &mut out[oy * row_len..(oy + 1) * row_len];
        for i in 0..row_len {
            dst[i] = store_u8(top[i] + (bottom[i] - top[i]) * ty.frac);
        }
    }
    ImageBuffer::new(out_w, out_h, c, out)
}

/// Marks every output pixel whose bilinear support touches a nonzero sample of
/// the single-channel `region` plane. Zero-weight taps do not count.
pub fn resize_support(region: &ImageBuffer, out_w: u32, out_h: u32) -> Result<ImageBuffer> {
    if region.channels() != 1 {
        return Err(Error::invalid("support region must be a single-channel plane"));
    }
    if out_w == 0 || out_h == 0 {
        return Err(Error::invalid("resize target must be at least 1x1"));
    }
    let xs = axis_taps(region.width(), out_w);
    let ys = axis_taps(region.height(), out_h);
    let on = |x: usize, y: usize| region.pixel(x as u32, y as u32)[0] != 0;
    let mut out = Vec::with_capacity(out_w as usize * out_h as usize);
    for ty in &ys {
        let rows: &[usize] = if ty.frac > 0.0 { &[ty.lo, ty.hi] } else { &[ty.lo] };
        for tx in &xs {
            let cols: &[usize] = if tx.frac > 0.0 { &[tx.lo, tx.hi] } else { &[tx.lo] };
            let hit = rows.iter().any(|&y| cols.iter().any(|&x| on(x, y)));
            out.push(if hit { 255 } else { 0 });
        }
    }
    ImageBuffer::new(out_w, out_h, 1, out)
}

//! Baseline TIFF reading and writing for unsigned 8/16-bit multi-sample rasters.
//!
//! Strip and tile organisation, chunky and planar configuration, no compression
//! or Deflate (with or without horizontal differencing). The GeoTIFF
//! `ModelPixelScaleTag` is read and written so ground sample distance survives
//! a round trip; no other geo keys are interpreted.

use std::io::{Read, Write};
use std::path::Path;

use flate2::read::ZlibDecoder;
use flate2::write::ZlibEncoder;

use super::MultibandImage;
use crate::error::{Error, Result};

const TAG_IMAGE_WIDTH: u16 = 256;
const TAG_IMAGE_LENGTH: u16 = 257;
const TAG_BITS_PER_SAMPLE: u16 = 258;
const TAG_COMPRESSION: u16 = 259;
const TAG_PHOTOMETRIC: u16 = 262;
const TAG_STRIP_OFFSETS: u16 = 273;
const TAG_SAMPLES_PER_PIXEL: u16 = 277;
const TAG_ROWS_PER_STRIP: u16 = 278;
const TAG_STRIP_BYTE_COUNTS: u16 = 279;
const TAG_PLANAR_CONFIG: u16 = 284;
const TAG_PREDICTOR: u16 = 317;
const TAG_TILE_WIDTH: u16 = 322;
const TAG_TILE_LENGTH: u16 = 323;
const TAG_TILE_OFFSETS: u16 = 324;
const TAG_TILE_BYTE_COUNTS: u16 = 325;
const TAG_EXTRA_SAMPLES: u16 = 338;
const TAG_SAMPLE_FORMAT: u16 = 339;
const TAG_MODEL_PIXEL_SCALE: u16 = 33550;

const TYPE_BYTE: u16 = 1;
const TYPE_SHORT: u16 = 3;
const TYPE_LONG: u16 = 4;
const TYPE_DOUBLE: u16 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compression {
    None,
    Deflate,
}

/// Chunk organisation used by [`write_tiff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiffLayout {
    Strips { rows_per_strip: usize },
    Tiles { tile_width: usize, tile_height: usize },
}

/// Header-level facts about a TIFF file.
#[derive(Debug, Clone, PartialEq)]
pub struct TiffInfo {
    pub width: usize,
    pub height: usize,
    pub samples_per_pixel: usize,
    pub bits_per_sample: u8,
    /// Meters per pixel from `ModelPixelScaleTag`, if present.
    pub pixel_scale: Option<(f64, f64)>,
}

pub struct DecodedTiff {
    pub info: TiffInfo,
    /// Band-planar samples.
    pub pixels: Vec<u16>,
}

#[derive(Clone, Copy)]
enum ByteOrder {
    Little,
    Big,
}

struct Cursor<'a> {
    data: &'a [u8],
    order: ByteOrder,
}

impl<'a> Cursor<'a> {
    fn bytes(&self, offset: usize, len: usize) -> Result<&'a [u8]> {
        offset
            .checked_add(len)
            .and_then(|end| self.data.get(offset..end))
            .ok_or_else(|| Error::CorruptRaster(format!("read of {len} bytes at offset {offset} past end of file")))
    }

    fn u16(&self, offset: usize) -> Result<u16> {
        let b: [u8; 2] = self.bytes(offset, 2)?.try_into().unwrap();
        Ok(match self.order {
            ByteOrder::Little => u16::from_le_bytes(b),
            ByteOrder::Big => u16::from_be_bytes(b),
        })
    }

    fn u32(&self, offset: usize) -> Result<u32> {
        let b: [u8; 4] = self.bytes(offset, 4)?.try_into().unwrap();
        Ok(match self.order {
            ByteOrder::Little => u32::from_le_bytes(b),
            ByteOrder::Big => u32::from_be_bytes(b),
        })
    }

    fn f64(&self, offset: usize) -> Result<f64> {
        let b: [u8; 8] = self.bytes(offset, 8)?.try_into().unwrap();
        Ok(match self.order {
            ByteOrder::Little => f64::from_le_bytes(b),
            ByteOrder::Big => f64::from_be_bytes(b),
        })
    }
}

struct Entry {
    tag: u16,
    kind: u16,
    count: usize,
    /// Offset of the value bytes (inline or out-of-line).
    value_offset: usize,
}

impl Entry {
    fn ints(&self, cur: &Cursor) -> Result<Vec<u64>> {
        (0..self.count)
            .map(|i| match self.kind {
                TYPE_BYTE => Ok(u64::from(cur.bytes(self.value_offset + i, 1)?[0])),
                TYPE_SHORT => cur.u16(self.value_offset + 2 * i).map(u64::from),
                TYPE_LONG => cur.u32(self.value_offset + 4 * i).map(u64::from),
                other => Err(Error::UnsupportedFormat(format!("tag {} has non-integer type {other}", self.tag))),
            })
            .collect()
    }

    fn doubles(&self, cur: &Cursor) -> Result<Vec<f64>> {
        if self.kind != TYPE_DOUBLE {
            return Err(Error::UnsupportedFormat(format!("tag {} expected DOUBLE values", self.tag)));
        }
        (0..self.count).map(|i| cur.f64(self.value_offset + 8 * i)).collect()
    }
}

fn type_size(kind: u16) -> Option<usize> {
    match kind {
        1 | 2 | 6 | 7 => Some(1),
        3 | 8 => Some(2),
        4 | 9 | 11 => Some(4),
        5 | 10 | 12 => Some(8),
        _ => None,
    }
}

struct Ifd {
    entries: Vec<Entry>,
}

impl Ifd {
    fn find(&self, tag: u16) -> Option<&Entry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    fn ints(&self, cur: &Cursor, tag: u16) -> Result<Option<Vec<u64>>> {
        self.find(tag).map(|e| e.ints(cur)).transpose()
    }

    fn scalar(&self, cur: &Cursor, tag: u16) -> Result<Option<u64>> {
        Ok(self.ints(cur, tag)?.and_then(|v| v.first().copied()))
    }

    fn required(&self, cur: &Cursor, tag: u16, name: &str) -> Result<u64> {
        self.scalar(cur, tag)?.ok_or_else(|| Error::UnsupportedFormat(format!("missing required tag {name}")))
    }
}

fn parse_header(data: &[u8]) -> Result<(Cursor<'_>, Ifd)> {
    if data.len() < 8 {
        return Err(Error::CorruptRaster("file shorter than a TIFF header".into()));
    }
    let order = match &data[..2] {
        b"II" => ByteOrder::Little,
        b"MM" => ByteOrder::Big,
        _ => return Err(Error::UnsupportedFormat("not a TIFF file (bad byte-order mark)".into())),
    };
    let cur = Cursor { data, order };
    match cur.u16(2)? {
        42 => {}
        43 => return Err(Error::UnsupportedFormat("BigTIFF is not supported".into())),
        v => return Err(Error::UnsupportedFormat(format!("bad TIFF version {v}"))),
    }
    let ifd_offset = cur.u32(4)? as usize;
    let count = cur.u16(ifd_offset)? as usize;
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let base = ifd_offset + 2 + 12 * i;
        let tag = cur.u16(base)?;
        let kind = cur.u16(base + 2)?;
        let count = cur.u32(base + 4)? as usize;
        let Some(size) = type_size(kind) else {
            // Unknown field types are skipped, as baseline readers must.
            continue;
        };
        let total =
            size.checked_mul(count).ok_or_else(|| Error::CorruptRaster(format!("tag {tag} value count overflows")))?;
        let value_offset = if total <= 4 { base + 8 } else { cur.u32(base + 8)? as usize };
        entries.push(Entry { tag, kind, count, value_offset });
    }
    Ok((cur, Ifd { entries }))
}

struct Layout {
    info: TiffInfo,
    compression: Compression,
    predictor: u64,
    planar: bool,
    chunk_width: usize,
    chunk_height: usize,
    offsets: Vec<u64>,
    byte_counts: Vec<u64>,
}

fn parse_layout(cur: &Cursor, ifd: &Ifd) -> Result<Layout> {
    let width = ifd.required(cur, TAG_IMAGE_WIDTH, "ImageWidth")? as usize;
    let height = ifd.required(cur, TAG_IMAGE_LENGTH, "ImageLength")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::CorruptRaster(format!("image dimensions {width}x{height}")));
    }
    let samples = ifd.scalar(cur, TAG_SAMPLES_PER_PIXEL)?.unwrap_or(1) as usize;
    if !(1..=16).contains(&samples) {
        return Err(Error::UnsupportedFormat(format!("{samples} samples per pixel (1 to 16 supported)")));
    }
    let bits = ifd.ints(cur, TAG_BITS_PER_SAMPLE)?.unwrap_or_else(|| vec![1]);
    let bits_per_sample = bits[0];
    if bits.iter().any(|&b| b != bits_per_sample) || !(bits_per_sample == 8 || bits_per_sample == 16) {
        return Err(Error::UnsupportedFormat(format!("bits per sample {bits:?} (uniform 8 or 16 required)")));
    }
    if let Some(formats) = ifd.ints(cur, TAG_SAMPLE_FORMAT)? {
        if formats.iter().any(|&f| f != 1) {
            return Err(Error::UnsupportedFormat(format!("sample format {formats:?} (unsigned integer required)")));
        }
    }
    let compression = match ifd.scalar(cur, TAG_COMPRESSION)?.unwrap_or(1) {
        1 => Compression::None,
        8 | 32946 => Compression::Deflate,
        other => return Err(Error::UnsupportedFormat(format!("compression scheme {other}"))),
    };
    let predictor = ifd.scalar(cur, TAG_PREDICTOR)?.unwrap_or(1);
    if predictor != 1 && predictor != 2 {
        return Err(Error::UnsupportedFormat(format!("predictor {predictor}")));
    }
    let planar = match ifd.scalar(cur, TAG_PLANAR_CONFIG)?.unwrap_or(1) {
        1 => false,
        2 => true,
        other => return Err(Error::UnsupportedFormat(format!("planar configuration {other}"))),
    };

    let tiled = ifd.find(TAG_TILE_WIDTH).is_some();
    let (chunk_width, chunk_height, offsets, byte_counts) = if tiled {
        let tw = ifd.required(cur, TAG_TILE_WIDTH, "TileWidth")? as usize;
        let th = ifd.required(cur, TAG_TILE_LENGTH, "TileLength")? as usize;
        let offsets = ifd.ints(cur, TAG_TILE_OFFSETS)?;
        let counts = ifd.ints(cur, TAG_TILE_BYTE_COUNTS)?;
        match (offsets, counts) {
            (Some(o), Some(c)) if tw > 0 && th > 0 => (tw, th, o, c),
            _ => return Err(Error::CorruptRaster("tiled file without usable tile offsets".into())),
        }
    } else {
        let rows = ifd.scalar(cur, TAG_ROWS_PER_STRIP)?.unwrap_or(u64::from(u32::MAX)) as usize;
        let offsets = ifd.ints(cur, TAG_STRIP_OFFSETS)?;
        let counts = ifd.ints(cur, TAG_STRIP_BYTE_COUNTS)?;
        match (offsets, counts) {
            (Some(o), Some(c)) => (width, rows.clamp(1, height), o, c),
            _ => return Err(Error::CorruptRaster("missing strip offsets or byte counts".into())),
        }
    };

    let pixel_scale = match ifd.find(TAG_MODEL_PIXEL_SCALE) {
        Some(e) => {
            let v = e.doubles(cur)?;
            match v.as_slice() {
                [sx, sy, ..] if *sx > 0.0 && *sy > 0.0 => Some((*sx, *sy)),
                _ => None,
            }
        }
        None => None,
    };

    Ok(Layout {
        info: TiffInfo {
            width,
            height,
            samples_per_pixel: samples,
            bits_per_sample: bits_per_sample as u8,
            pixel_scale,
        },
        compression,
        predictor,
        planar,
        chunk_width,
        chunk_height,
        offsets,
        byte_counts,
    })
}

/// Reads only the header and first IFD.
pub fn read_tiff_info(data: &[u8]) -> Result<TiffInfo> {
    let (cur, ifd) = parse_header(data)?;
    Ok(parse_layout(&cur, &ifd)?.info)
}

pub fn read_tiff(data: &[u8]) -> Result<DecodedTiff> {
    let (cur, ifd) = parse_header(data)?;
    let layout = parse_layout(&cur, &ifd)?;
    let info = &layout.info;
    let (width, height, samples) = (info.width, info.height, info.samples_per_pixel);
    let bytes_per_sample = usize::from(info.bits_per_sample / 8);

    let across = width.div_ceil(layout.chunk_width);
    let down = height.div_ceil(layout.chunk_height);
    let planes = if layout.planar { samples } else { 1 };
    let expected_chunks = across * down * planes;
    if layout.offsets.len() < expected_chunks || layout.byte_counts.len() < expected_chunks {
        return Err(Error::CorruptRaster(format!(
            "{} chunk offsets for {expected_chunks} chunks",
            layout.offsets.len().min(layout.byte_counts.len())
        )));
    }
    let chunk_samples = if layout.planar { 1 } else { samples };
    let plane = width * height;
    let mut pixels = vec![0u16; plane * samples];

    for index in 0..expected_chunks {
        let plane_index = index / (across * down);
        let within = index % (across * down);
        let (cx, cy) = (within % across, within / across);
        let x0 = cx * layout.chunk_width;
        let y0 = cy * layout.chunk_height;
        // Strips cover only the rows that exist; tiles are always full size.
        let rows =
            if ifd.find(TAG_TILE_WIDTH).is_some() { layout.chunk_height } else { layout.chunk_height.min(height - y0) };
        let row_samples = layout.chunk_width * chunk_samples;
        let needed = rows * row_samples * bytes_per_sample;

        let raw = cur.bytes(layout.offsets[index] as usize, layout.byte_counts[index] as usize)?;
        let mut buf = match layout.compression {
            Compression::None => raw.to_vec(),
            Compression::Deflate => {
                let mut out = Vec::with_capacity(needed);
                ZlibDecoder::new(raw)
                    .read_to_end(&mut out)
                    .map_err(|e| Error::CorruptRaster(format!("deflate chunk {index}: {e}")))?;
                out
            }
        };
        if buf.len() < needed {
            return Err(Error::CorruptRaster(format!("chunk {index} holds {} bytes, expected {needed}", buf.len())));
        }
        buf.truncate(needed);

        let mut values: Vec<u16> = match bytes_per_sample {
            1 => buf.iter().map(|&b| u16::from(b)).collect(),
            _ => buf
                .chunks_exact(2)
                .map(|c| match cur.order {
                    ByteOrder::Little => u16::from_le_bytes([c[0], c[1]]),
                    ByteOrder::Big => u16::from_be_bytes([c[0], c[1]]),
                })
                .collect(),
        };
        if layout.predictor == 2 {
            for row in values.chunks_exact_mut(row_samples) {
                for i in chunk_samples..row.len() {
                    row[i] = if bytes_per_sample == 1 {
                        u16::from((row[i] as u8).wrapping_add(row[i - chunk_samples] as u8))
                    } else {
                        row[i].wrapping_add(row[i - chunk_samples])
                    };
                }
            }
        }

        for r in 0..rows {
            let y = y0 + r;
            if y >= height {
                break;
            }
            for c in 0..layout.chunk_width {
                let x = x0 + c;
                if x >= width {
                    break;
                }
                let base = r * row_samples + c * chunk_samples;
                if layout.planar {
                    pixels[plane_index * plane + y * width + x] = values[base];
                } else {
                    for s in 0..samples {
                        pixels[s * plane + y * width + x] = values[base + s];
                    }
                }
            }
        }
    }

    Ok(DecodedTiff { info: layout.info, pixels })
}

struct IfdWriter {
    entries: Vec<(u16, u16, u32, Vec<u8>)>,
}

impl IfdWriter {
    fn shorts(&mut self, tag: u16, values: &[u16]) {
        let bytes = values.iter().flat_map(|v| v.to_le_bytes()).collect();
        self.entries.push((tag, TYPE_SHORT, values.len() as u32, bytes));
    }

    fn longs(&mut self, tag: u16, values: &[u32]) {
        let bytes = values.iter().flat_map(|v| v.to_le_bytes()).collect();
        self.entries.push((tag, TYPE_LONG, values.len() as u32, bytes));
    }

    fn doubles(&mut self, tag: u16, values: &[f64]) {
        let bytes = values.iter().flat_map(|v| v.to_le_bytes()).collect();
        self.entries.push((tag, TYPE_DOUBLE, values.len() as u32, bytes));
    }
}

/// Writes a little-endian, chunky-interleaved TIFF. Images declaring 8 bits are
/// stored as 8-bit samples, all others in 16-bit containers.
pub fn write_tiff(
    img: &MultibandImage,
    path: impl AsRef<Path>,
    layout: TiffLayout,
    compression: Compression,
) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_tiff(img, layout, compression)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub(crate) fn encode_tiff(img: &MultibandImage, layout: TiffLayout, compression: Compression) -> Result<Vec<u8>> {
    let (width, height, samples) = (img.width(), img.height(), img.band_count());
    let wide = img.bit_depth() > 8;
    let (cw, ch, tiled) = match layout {
        TiffLayout::Strips { rows_per_strip } => (width, rows_per_strip.clamp(1, height), false),
        TiffLayout::Tiles { tile_width, tile_height } => {
            if tile_width == 0 || tile_height == 0 || tile_width % 16 != 0 || tile_height % 16 != 0 {
                return Err(Error::UnsupportedFormat("tile dimensions must be positive multiples of 16".into()));
            }
            (tile_width, tile_height, true)
        }
    };
    let plane = width * height;
    let mut chunks = Vec::new();
    for cy in (0..height).step_by(ch) {
        for cx in (0..width).step_by(cw) {
            let rows = if tiled { ch } else { ch.min(height - cy) };
            let mut raw = Vec::with_capacity(rows * cw * samples * 2);
            for y in cy..cy + rows {
                for x in cx..cx + cw {
                    for s in 0..samples {
                        let v = if x < width && y < height { img.pixels()[s * plane + y * width + x] } else { 0 };
                        if wide {
                            raw.extend_from_slice(&v.to_le_bytes());
                        } else {
                            raw.push(v as u8);
                        }
                    }
                }
            }
            chunks.push(match compression {
                Compression::None => raw,
                Compression::Deflate => {
                    let mut enc = ZlibEncoder::new(Vec::new(), flate2::Compression::default());
                    enc.write_all(&raw).and_then(|_| enc.finish()).map_err(|e| Error::io("<deflate>", e))?
                }
            });
        }
    }

    let mut out = Vec::new();
    out.extend_from_slice(b"II");
    out.extend_from_slice(&42u16.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    let mut offsets = Vec::with_capacity(chunks.len());
    for chunk in &chunks {
        offsets.push(out.len() as u32);
        out.extend_from_slice(chunk);
        if out.len() % 2 == 1 {
            out.push(0);
        }
    }
    let counts: Vec<u32> = chunks.iter().map(|c| c.len() as u32).collect();

    let mut ifd = IfdWriter { entries: Vec::new() };
    ifd.longs(TAG_IMAGE_WIDTH, &[width as u32]);
    ifd.longs(TAG_IMAGE_LENGTH, &[height as u32]);
    ifd.shorts(TAG_BITS_PER_SAMPLE, &vec![if wide { 16 } else { 8 }; samples]);
    ifd.shorts(TAG_COMPRESSION, &[if compression == Compression::Deflate { 8 } else { 1 }]);
    ifd.shorts(TAG_PHOTOMETRIC, &[if samples == 3 { 2 } else { 1 }]);
    if !tiled {
        ifd.longs(TAG_STRIP_OFFSETS, &offsets);
    }
    ifd.shorts(TAG_SAMPLES_PER_PIXEL, &[samples as u16]);
    if !tiled {
        ifd.longs(TAG_ROWS_PER_STRIP, &[ch as u32]);
        ifd.longs(TAG_STRIP_BYTE_COUNTS, &counts);
    }
    ifd.shorts(TAG_PLANAR_CONFIG, &[1]);
    if tiled {
        ifd.longs(TAG_TILE_WIDTH, &[cw as u32]);
        ifd.longs(TAG_TILE_LENGTH, &[ch as u32]);
        ifd.longs(TAG_TILE_OFFSETS, &offsets);
        ifd.longs(TAG_TILE_BYTE_COUNTS, &counts);
    }
    let extra = match samples {
        3 => 0,
        n if n > 1 => n - 1,
        _ => 0,
    };
    if extra > 0 {
        ifd.shorts(TAG_EXTRA_SAMPLES, &vec![0; extra]);
    }
    ifd.shorts(TAG_SAMPLE_FORMAT, &vec![1; samples]);
    let (gx, gy) = img.gsd();
    ifd.doubles(TAG_MODEL_PIXEL_SCALE, &[gx, gy, 0.0]);
    ifd.entries.sort_by_key(|e| e.0);

    let ifd_offset = out.len() as u32;
    out[4..8].copy_from_slice(&ifd_offset.to_le_bytes());
    let table_len = 2 + 12 * ifd.entries.len() + 4;
    let mut overflow = Vec::new();
    let overflow_base = ifd_offset as usize + table_len;
    out.extend_from_slice(&(ifd.entries.len() as u16).to_le_bytes());
    for (tag, kind, count, bytes) in &ifd.entries {
        out.extend_from_slice(&tag.to_le_bytes());
        out.extend_from_slice(&kind.to_le_bytes());
        out.extend_from_slice(&count.to_le_bytes());
        if bytes.len() <= 4 {
            let mut inline = [0u8; 4];
            inline[..bytes.len()].copy_from_slice(bytes);
            out.extend_from_slice(&inline);
        } else {
            out.extend_from_slice(&((overflow_base + overflow.len()) as u32).to_le_bytes());
            overflow.extend_from_slice(bytes);
            if overflow.len() % 2 == 1 {
                overflow.push(0);
            }
        }
    }
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&overflow);
    Ok(out)
}

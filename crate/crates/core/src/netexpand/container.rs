//! `.wtns` tensor container.
//!
//! Little-endian, no padding:
//!
//! ```text
//! "WTNS" | u32 version = 1 | u32 ndim = 4 | 4 x u32 dims | u32 dtype (1 = f32)
//! | u32 W | W x f32 wavelengths (nm) | prod(dims) x f32 data, row-major
//! ```

use std::path::Path;

use super::WeightTensor;
use crate::error::{Error, Result};

pub const HEADER_MAGIC: [u8; 4] = *b"WTNS";
pub const VERSION: u32 = 1;
const DTYPE_F32: u32 = 1;

pub fn tensor_to_bytes(w: &WeightTensor) -> Vec<u8> {
    let wavelengths = w.in_channel_wavelengths().unwrap_or(&[]);
    let mut out = Vec::with_capacity(36 + 4 * wavelengths.len() + 4 * w.values().len());
    out.extend_from_slice(&HEADER_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&4u32.to_le_bytes());
    for d in w.shape() {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.extend_from_slice(&DTYPE_F32.to_le_bytes());
    out.extend_from_slice(&(wavelengths.len() as u32).to_le_bytes());
    for v in wavelengths {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in w.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len()).ok_or_else(|| {
            Error::CorruptTensorFile(format!("need {n} bytes at offset {}, file has {}", self.pos, self.data.len()))
        })?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let bytes = self.take(n.checked_mul(4).ok_or_else(|| Error::CorruptTensorFile("length overflow".into()))?)?;
        Ok(bytes.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

pub fn tensor_from_bytes(data: &[u8]) -> Result<WeightTensor> {
    let mut r = Reader { data, pos: 0 };
    if r.take(4)? != HEADER_MAGIC {
        return Err(Error::CorruptTensorFile("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::CorruptTensorFile(format!("unsupported version {version}")));
    }
    let ndim = r.u32()?;
    if ndim != 4 {
        return Err(Error::CorruptTensorFile(format!("ndim {ndim}, expected 4")));
    }
    let mut shape = [0usize; 4];
    for d in &mut shape {
        *d = r.u32()? as usize;
    }
    let dtype = r.u32()?;
    if dtype != DTYPE_F32 {
        return Err(Error::CorruptTensorFile(format!("dtype tag {dtype}, expected 1 (f32)")));
    }
    let wl_count = r.u32()? as usize;
    let wavelengths = r.f32s(wl_count)?;
    let count = shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::CorruptTensorFile("element count overflow".into()))?;
    let values = r.f32s(count)?;
    if r.pos != data.len() {
        return Err(Error::CorruptTensorFile(format!("{} trailing bytes", data.len() - r.pos)));
    }
    let wavelengths = (wl_count > 0).then_some(wavelengths);
    WeightTensor::new(shape, values, wavelengths).map_err(|e| Error::CorruptTensorFile(e.to_string()))
}

pub fn write_tensor(w: &WeightTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, tensor_to_bytes(w)).map_err(|e| Error::io(path, e))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<WeightTensor> {
    let path = path.as_ref();
    let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    tensor_from_bytes(&data)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn layout_and_size() {
        let w = WeightTensor::new([64, 8, 7, 7], vec![0.25; 25088], Some(vec![500.0; 8])).unwrap();
        let bytes = tensor_to_bytes(&w);
        assert_eq!(&bytes[..4], b"WTNS");
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 64);
        assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 8);
        // 12 fixed + 16 dims + 8 dtype/count + 4 per wavelength + 4 per value.
        assert_eq!(bytes.len(), 36 + 4 * 8 + 4 * 25088);

        let untagged = WeightTensor::new([64, 8, 7, 7], vec![0.25; 25088], None).unwrap();
        assert_eq!(tensor_to_bytes(&untagged).len(), 36 + 4 * 25088);
    }

    #[test]
    fn corruption_detected() {
        let w = WeightTensor::new([1, 3, 2, 2], (0..12).map(|v| v as f32).collect(), None).unwrap();
        let good = tensor_to_bytes(&w);
        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(tensor_from_bytes(&bad_magic), Err(Error::CorruptTensorFile(_))));
        let mut bad_version = good.clone();
        bad_version[4] = 2;
        assert!(matches!(tensor_from_bytes(&bad_version), Err(Error::CorruptTensorFile(_))));
        assert!(matches!(tensor_from_bytes(&good[..good.len() - 1]), Err(Error::CorruptTensorFile(_))));
        let mut long = good.clone();
        long.push(0);
        assert!(matches!(tensor_from_bytes(&long), Err(Error::CorruptTensorFile(_))));
        let mut bad_wl = good;
        bad_wl[32] = 2;
        assert!(tensor_from_bytes(&bad_wl).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_bit_exact(
            dims in (1usize..5, 1usize..5, 1usize..4, 1usize..4),
            bits in prop::collection::vec(any::<u32>(), 400),
            tagged in any::<bool>(),
        ) {
            let shape = [dims.0, dims.1, dims.2, dims.3];
            let n: usize = shape.iter().product();
            let values: Vec<f32> = bits[..n].iter().map(|&b| f32::from_bits(b)).collect();
            let wl = tagged.then(|| bits[n..n + dims.1].iter().map(|&b| f32::from_bits(b)).collect());
            let w = WeightTensor::new(shape, values, wl).unwrap();
            let back = tensor_from_bytes(&tensor_to_bytes(&w)).unwrap();
            prop_assert_eq!(tensor_to_bytes(&back), tensor_to_bytes(&w));
            prop_assert_eq!(back.shape(), shape);
        }
    }
}

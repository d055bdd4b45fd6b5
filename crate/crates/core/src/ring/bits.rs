//! Word-level helpers over little-endian bit vectors: bit `j` lives at bit
//! `j % 64` of word `j / 64`.

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn word_or_zero(words: &[u64], idx: isize) -> u64 {
    if idx < 0 {
        0
    } else {
        words.get(idx as usize).copied().unwrap_or(0)
    }
}

/// Reads the 64 bits starting at bit position `pos`. Positions outside the
/// slice (including negative ones) read as zero.
#[inline]
pub(crate) fn bits64_at(words: &[u64], pos: isize) -> u64 {
    let q = pos.div_euclid(WORD_BITS as isize);
    let off = pos.rem_euclid(WORD_BITS as isize) as u32;
    let lo = word_or_zero(words, q);
    if off == 0 {
        lo
    } else {
        let hi = word_or_zero(words, q + 1);
        (lo >> off) | (hi << (WORD_BITS as u32 - off))
    }
}

#[inline]
fn range_mask(word: usize, lo: usize, hi: usize) -> u64 {
    let base = word * WORD_BITS;
    let from = lo.max(base) - base;
    let to = hi.min(base + WORD_BITS - 1) - base;
    let width = to - from + 1;
    let ones = if width == WORD_BITS {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    ones << from
}

/// `dst[k + shift] ^= src[k]` for every bit position `k` in `lo..=hi`.
///
/// `lo + shift` must be non-negative and `hi + shift` must fit in `dst`.
/// An empty range (`lo > hi`) is a no-op.
pub(crate) fn xor_shifted_range(dst: &mut [u64], src: &[u64], lo: usize, hi: usize, shift: isize) {
    if lo > hi {
        return;
    }
    let dlo = lo as isize + shift;
    let dhi = hi as isize + shift;
    debug_assert!(dlo >= 0);
    let (dlo, dhi) = (dlo as usize, dhi as usize);
    debug_assert!(dhi < dst.len() * WORD_BITS);
    for w in dlo / WORD_BITS..=dhi / WORD_BITS {
        let val = bits64_at(src, (w * WORD_BITS) as isize - shift);
        dst[w] ^= val & range_mask(w, dlo, dhi);
    }
}

/// Highest set bit at a position `<= upto`, if any.
pub(crate) fn highest_set_at_or_below(words: &[u64], upto: usize) -> Option<usize> {
    let mut w = upto / WORD_BITS;
    let mut word = words[w] & range_mask(w, 0, upto);
    loop {
        if word != 0 {
            return Some(w * WORD_BITS + (WORD_BITS - 1 - word.leading_zeros() as usize));
        }
        if w == 0 {
            return None;
        }
        w -= 1;
        word = words[w];
    }
}

/// Lowest set bit at a position `>= from` and `< limit`, if any.
pub(crate) fn lowest_set_at_or_above(words: &[u64], from: usize, limit: usize) -> Option<usize> {
    if from >= limit {
        return None;
    }
    let mut w = from / WORD_BITS;
    let mut word = words[w] & range_mask(w, from, limit - 1);
    loop {
        if word != 0 {
            let pos = w * WORD_BITS + word.trailing_zeros() as usize;
            return (pos < limit).then_some(pos);
        }
        w += 1;
        if w * WORD_BITS >= limit {
            return None;
        }
        word = words[w] & range_mask(w, from, limit - 1);
    }
}

#[inline]
pub(crate) fn get_bit(words: &[u64], j: usize) -> bool {
    (words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(words: &mut [u64], j: usize) {
    words[j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
}

/// Reduces `x < 2 * modulus` into `[0, modulus)` by one conditional subtraction.
#[inline(always)]
pub(crate) fn reduce_once(x: usize, modulus: usize) -> usize {
    debug_assert!(x < 2 * modulus);
    if x >= modulus {
        x - modulus
    } else {
        x
    }
}

/// Packs bit-vector words into `ceil(bits / 8)` little-endian bytes.
pub(crate) fn words_to_bytes(words: &[u64], bits: usize) -> Vec<u8> {
    let nbytes = bits.div_ceil(8);
    words.iter().flat_map(|w| w.to_le_bytes()).take(nbytes).collect()
}

/// Inverse of [`words_to_bytes`]. Returns `None` when any pad bit above
/// `bits` is set. The caller checks the byte length.
pub(crate) fn bytes_to_words(bytes: &[u8], bits: usize) -> Option<Vec<u64>> {
    debug_assert_eq!(bytes.len(), bits.div_ceil(8));
    let mut words = vec![0u64; words_for(bits)];
    for (i, &b) in bytes.iter().enumerate() {
        words[i / 8] |= (b as u64) << (8 * (i % 8));
    }
    if !bits.is_multiple_of(WORD_BITS) {
        let last = words.last().copied().unwrap_or(0);
        if last >> (bits % WORD_BITS) != 0 {
            return None;
        }
    }
    Some(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_get(words: &[u64], pos: isize) -> bool {
        pos >= 0 && (pos as usize) < words.len() * 64 && get_bit(words, pos as usize)
    }

    #[test]
    fn bits64_at_matches_bitwise_reads() {
        let words = [0x0123_4567_89ab_cdefu64, 0xfedc_ba98_7654_3210, 0x5555_aaaa_0f0f_f0f0];
        for pos in -70isize..200 {
            let v = bits64_at(&words, pos);
            for b in 0..64 {
                assert_eq!((v >> b) & 1 == 1, naive_get(&words, pos + b), "pos {pos} bit {b}");
            }
        }
    }

    #[test]
    fn shifted_xor_matches_bitwise() {
        let src = [0xdead_beef_cafe_f00du64, 0x1234_5678_9abc_def0, 0x0f0f_0f0f_0f0f_0f0f];
        for lo in [0usize, 3, 63, 64, 100] {
            for hi in [lo, lo + 1, lo + 40, 150] {
                for shift in [-(lo as isize), -1, 0, 1, 17, 64, 65] {
                    if lo as isize + shift < 0 || hi as isize + shift >= 256 {
                        continue;
                    }
                    let mut dst = [0u64; 4];
                    xor_shifted_range(&mut dst, &src, lo, hi, shift);
                    let mut want = [0u64; 4];
                    for k in lo..=hi {
                        if get_bit(&src, k) {
                            flip_bit(&mut want, (k as isize + shift) as usize);
                        }
                    }
                    assert_eq!(dst, want, "lo {lo} hi {hi} shift {shift}");
                }
            }
        }
    }

    #[test]
    fn set_bit_searches() {
        let mut w = [0u64; 3];
        flip_bit(&mut w, 5);
        flip_bit(&mut w, 70);
        flip_bit(&mut w, 150);
        assert_eq!(highest_set_at_or_below(&w, 191), Some(150));
        assert_eq!(highest_set_at_or_below(&w, 149), Some(70));
        assert_eq!(highest_set_at_or_below(&w, 69), Some(5));
        assert_eq!(highest_set_at_or_below(&w, 4), None);
        assert_eq!(lowest_set_at_or_above(&w, 0, 192), Some(5));
        assert_eq!(lowest_set_at_or_above(&w, 6, 192), Some(70));
        assert_eq!(lowest_set_at_or_above(&w, 71, 150), None);
        assert_eq!(lowest_set_at_or_above(&w, 71, 151), Some(150));
    }

    #[test]
    fn byte_packing_rejects_pad_bits() {
        let words = bytes_to_words(&[0xff, 0x01], 9).unwrap();
        assert_eq!(words, vec![0x1ff]);
        assert!(bytes_to_words(&[0xff, 0x03], 9).is_none());
        assert_eq!(words_to_bytes(&words, 9), vec![0xff, 0x01]);
    }
}

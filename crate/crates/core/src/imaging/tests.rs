use super::*;
use proptest::prelude::*;

fn rgb(width: u32, height: u32, px: impl Fn(u32, u32) -> [u8; 3]) -> Image {
    let mut data = Vec::with_capacity((width * height * 3) as usize);
    for y in 0..height {
        for x in 0..width {
            data.extend_from_slice(&px(x, y));
        }
    }
    Image::new(width, height, 3, data).unwrap()
}

fn gray(width: u32, height: u32, values: &[u8]) -> Image {
    Image::new(width, height, 1, values.to_vec()).unwrap()
}

/// Exhaustive between-class-variance scan, recomputed per threshold from the
/// raw pixel partition. Independent of the histogram sweep in `filters`.
fn otsu_oracle(pixels: &[u8]) -> u8 {
    let mut best_t = 0u8;
    let mut best_var = f64::NEG_INFINITY;
    for t in 0..=255u16 {
        let low: Vec<f64> = pixels.iter().filter(|&&p| p as u16 <= t).map(|&p| p as f64).collect();
        let high: Vec<f64> = pixels.iter().filter(|&&p| p as u16 > t).map(|&p| p as f64).collect();
        let var = if low.is_empty() || high.is_empty() {
            0.0
        } else {
            let m0 = low.iter().sum::<f64>() / low.len() as f64;
            let m1 = high.iter().sum::<f64>() / high.len() as f64;
            low.len() as f64 * high.len() as f64 * (m0 - m1) * (m0 - m1)
        };
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    best_t
}

#[test]
fn grayscale_white_and_black() {
    let img = rgb(2, 1, |x, _| if x == 0 { [255, 255, 255] } else { [0, 0, 0] });
    let g = to_grayscale(&img).unwrap();
    assert_eq!(g.data(), &[255, 0]);
}

#[test]
fn grayscale_luma_formula() {
    // 0.299*100 + 0.587*150 + 0.114*200 = 29.9 + 88.05 + 22.8 = 140.75
    let img = rgb(1, 1, |_, _| [100, 150, 200]);
    assert_eq!(to_grayscale(&img).unwrap().data(), &[141]);
}

#[test]
fn grayscale_rejects_single_channel() {
    let img = gray(2, 2, &[1, 2, 3, 4]);
    assert!(matches!(
        to_grayscale(&img),
        Err(ImagingError::ChannelMismatch { expected: 3, got: 1 })
    ));
}

#[test]
fn max_rgb_basics() {
    let img = rgb(2, 1, |x, _| if x == 0 { [10, 200, 30] } else { [7, 7, 7] });
    assert_eq!(max_rgb_filter(&img).unwrap().data(), &[200, 7]);
    let red = rgb(4, 3, |_, _| [255, 0, 0]);
    assert!(max_rgb_filter(&red).unwrap().data().iter().all(|&p| p == 255));
}

#[test]
fn otsu_bimodal_smallest_tie() {
    // Any t in [0, 254] maximizes the variance; the smallest wins.
    let img = gray(6, 1, &[0, 0, 0, 255, 255, 255]);
    assert_eq!(otsu_threshold(&img).unwrap(), 0);
    assert_eq!(otsu_oracle(img.data()), 0);
}

#[test]
fn otsu_constant_image_returns_value() {
    let img = gray(3, 2, &[42; 6]);
    assert_eq!(otsu_threshold(&img).unwrap(), 42);
}

#[test]
fn otsu_two_cluster_matches_oracle() {
    let img = gray(6, 1, &[10, 12, 11, 200, 205, 198]);
    let t = otsu_threshold(&img).unwrap();
    assert_eq!(t, otsu_oracle(img.data()));
    assert!((12..=197).contains(&t), "threshold {t} outside [12, 197]");
}

#[test]
fn binarize_basics() {
    let img = gray(3, 1, &[0, 128, 255]);
    assert_eq!(binarize(&img, 128).unwrap().data(), &[0, 0, 255]);
    assert!(binarize(&img, 255).unwrap().data().iter().all(|&p| p == 0));
}

#[test]
fn binarize_after_otsu_keeps_bimodal_split() {
    let img = gray(6, 1, &[0, 0, 0, 255, 255, 255]);
    let t = otsu_threshold(&img).unwrap();
    assert_eq!(binarize(&img, t).unwrap().data(), img.data());
}

#[test]
fn blur_preserves_constant() {
    let img = gray(8, 8, &[77; 64]);
    assert_eq!(gaussian_blur_5x5(&img).unwrap().data(), img.data());
}

#[test]
fn blur_smooths_single_bright_pixel() {
    let mut values = [0u8; 81];
    values[4 * 9 + 4] = 255;
    let img = gray(9, 9, &values);
    let out = gaussian_blur_5x5(&img).unwrap();
    assert!(out.luma(4, 4) < 255);
    assert!(out.luma(3, 4) > 0);
    assert!(out.luma(4, 3) > 0);
}

#[test]
fn blur_impulse_matches_kernel() {
    // Recompute the kernel from its definition and check the impulse response.
    let sigma = 1.1f64;
    let taps: Vec<f64> = (-2..=2)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();

    let mut values = [0u8; 81];
    values[4 * 9 + 4] = 255;
    let img = gray(9, 9, &values);
    let out = gaussian_blur_5x5(&img).unwrap();
    for ky in 0..5u32 {
        for kx in 0..5u32 {
            let expect = (255.0 * taps[ky as usize] * taps[kx as usize] / (sum * sum)).round() as u8;
            assert_eq!(out.luma(2 + kx, 2 + ky), expect, "at kernel offset ({kx},{ky})");
        }
    }
}

#[test]
fn open_keeps_full_foreground() {
    let img = gray(6, 4, &[255; 24]);
    assert_eq!(morphological_open(&img).unwrap().data(), img.data());
}

#[test]
fn open_removes_isolated_pixel() {
    let mut values = [0u8; 49];
    values[3 * 7 + 3] = 255;
    let img = gray(7, 7, &values);
    assert!(morphological_open(&img).unwrap().data().iter().all(|&p| p == 0));
}

#[test]
fn open_preserves_solid_square() {
    // 5x5 foreground square centered in a 9x9 field survives erode+dilate.
    let mut values = [0u8; 81];
    for y in 2..7 {
        for x in 2..7 {
            values[y * 9 + x] = 255;
        }
    }
    let img = gray(9, 9, &values);
    assert_eq!(morphological_open(&img).unwrap().data(), img.data());
}

#[test]
fn open_rejects_non_binary() {
    let img = gray(2, 1, &[0, 100]);
    assert!(matches!(morphological_open(&img), Err(ImagingError::NotBinary(100))));
}

#[test]
fn preprocess_compositions() {
    let img = rgb(12, 9, |x, y| [(x * 20) as u8, (y * 25) as u8, ((x + y) * 10) as u8]);

    let g = to_grayscale(&img).unwrap();
    assert_eq!(preprocess(&img, PreprocessMethod::None).unwrap(), g);

    let t = otsu_threshold(&g).unwrap();
    assert_eq!(
        preprocess(&img, PreprocessMethod::Otsu).unwrap(),
        binarize(&g, t).unwrap()
    );

    let blurred = gaussian_blur_5x5(&g).unwrap();
    let tb = otsu_threshold(&blurred).unwrap();
    assert_eq!(
        preprocess(&img, PreprocessMethod::BlurOtsu).unwrap(),
        binarize(&blurred, tb).unwrap()
    );
    assert_eq!(
        preprocess(&img, PreprocessMethod::BlurOtsuOpen).unwrap(),
        morphological_open(&binarize(&blurred, tb).unwrap()).unwrap()
    );

    assert_eq!(
        preprocess(&img, PreprocessMethod::MaxRgb).unwrap(),
        max_rgb_filter(&img).unwrap()
    );
}

#[test]
fn resize_dimensions_and_identity() {
    let img = rgb(200, 64, |x, y| [(x % 256) as u8, (y * 3) as u8, 9]);
    let small = resize_antialias(&img, 100, 32).unwrap();
    assert_eq!((small.width(), small.height()), (100, 32));

    let flat = Image::filled(17, 11, 3, 99).unwrap();
    assert_eq!(resize_antialias(&flat, 17, 11).unwrap(), flat);
}

#[test]
fn resize_checkerboard_averages() {
    let img = gray(2, 2, &[0, 255, 255, 0]);
    let one = resize_antialias(&img, 1, 1).unwrap();
    let v = one.luma(0, 0) as i32;
    assert!((v - 128).abs() <= 1, "got {v}");
}

#[test]
fn resize_rejects_zero_target() {
    let img = gray(2, 2, &[0; 4]);
    assert!(resize_antialias(&img, 0, 5).is_err());
    assert!(resize_antialias(&img, 5, 0).is_err());
}

#[test]
fn preprocess_method_round_trips_names() {
    for m in PreprocessMethod::ALL {
        assert_eq!(m.to_string().parse::<PreprocessMethod>().unwrap(), m);
    }
    assert!("fancy".parse::<PreprocessMethod>().is_err());
}

#[test]
fn codec_png_jpeg_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = rgb(31, 17, |x, y| [(x * 8) as u8, (y * 13) as u8, 200]);

    let png_path = dir.path().join("img.png");
    save_png(&png_path, &img).unwrap();
    assert_eq!(load_image(&png_path).unwrap(), img);

    let jpeg_path = dir.path().join("img.jpg");
    save_jpeg(&jpeg_path, &img, DEFAULT_JPEG_QUALITY).unwrap();
    let back = load_image(&jpeg_path).unwrap();
    assert_eq!((back.width(), back.height(), back.channels()), (31, 17, 3));

    let gray_img = gray(5, 4, &(0..20).map(|v| (v * 12) as u8).collect::<Vec<_>>());
    let gray_path = dir.path().join("g.png");
    save_png(&gray_path, &gray_img).unwrap();
    assert_eq!(load_image(&gray_path).unwrap(), gray_img);
}

fn arb_gray(max_side: u32) -> impl Strategy<Value = Image> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), (w * h) as usize)
                .prop_map(move |data| Image::new(w, h, 1, data).unwrap())
        })
}

fn arb_rgb(max_side: u32) -> impl Strategy<Value = Image> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), (w * h * 3) as usize)
                .prop_map(move |data| Image::new(w, h, 3, data).unwrap())
        })
}

proptest! {
    #[test]
    fn dimensions_contract_holds(img in arb_rgb(64)) {
        let (w, h) = (img.width(), img.height());
        for m in PreprocessMethod::ALL {
            let out = preprocess(&img, m).unwrap();
            prop_assert_eq!((out.width(), out.height(), out.channels()), (w, h, 1));
        }
    }

    #[test]
    fn otsu_matches_exhaustive_search(img in arb_gray(16)) {
        let uniform = img.data().iter().all(|&p| p == img.data()[0]);
        prop_assume!(!uniform);
        prop_assert_eq!(otsu_threshold(&img).unwrap(), otsu_oracle(img.data()));
    }

    #[test]
    fn binarize_is_strictly_binary(img in arb_gray(32), t in any::<u8>()) {
        prop_assert!(binarize(&img, t).unwrap().data().iter().all(|&p| p == 0 || p == 255));
    }

    #[test]
    fn blur_preserves_global_mean(img in arb_gray(48)) {
        prop_assume!(img.width() >= 16 && img.height() >= 16);
        let mean = |i: &Image| i.data().iter().map(|&p| p as f64).sum::<f64>() / i.data().len() as f64;
        let out = gaussian_blur_5x5(&img).unwrap();
        prop_assert!((mean(&img) - mean(&out)).abs() <= 1.0);
    }

    #[test]
    fn preprocess_none_is_idempotent(img in arb_rgb(24)) {
        let once = preprocess(&img, PreprocessMethod::None).unwrap();
        let twice = preprocess(&once, PreprocessMethod::None).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn max_rgb_dominates_luma(img in arb_rgb(24)) {
        let maxed = max_rgb_filter(&img).unwrap();
        let luma = to_grayscale(&img).unwrap();
        for (a, b) in maxed.data().iter().zip(luma.data()) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn resize_hits_requested_dimensions(img in arb_gray(48), w in 1u32..64, h in 1u32..64) {
        let out = resize_antialias(&img, w, h).unwrap();
        prop_assert_eq!((out.width(), out.height()), (w, h));
    }
}

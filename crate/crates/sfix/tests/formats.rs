//! Y4M, raw and container formats.

mod common;

use proptest::prelude::*;
use sfix::codec::{delta_message, reference_message};
use sfix::container::{decode_container, encode_container};
use sfix::ingest::{
    collect_frames, gen_low_motion, read_y4m, write_y4m, CollectSink, FillMode, Fps, MemorySource,
    SynthParams, VideoSource,
};
use sfix::sfix_core::{encode_delta, EncoderConfig, Frame, FrameGeometry, PlaneLayout};

#[test]
fn golden_pair_survives_y4m() {
    let mut bytes = Vec::new();
    let frames = [common::reference_frame(), common::second_frame()];
    write_y4m(
        &mut bytes,
        common::geometry(),
        Fps { num: 25, den: 1 },
        frames.iter(),
    )
    .unwrap();
    assert!(bytes.starts_with(b"YUV4MPEG2 W10 H7 F25:1 Cmono\nFRAME\n"));
    assert_eq!(bytes.len(), 29 + 2 * (6 + 70));
    let mut r = read_y4m(bytes.as_slice()).unwrap();
    assert_eq!(r.geometry(), common::geometry());
    assert_eq!(collect_frames(&mut r).unwrap(), frames);
}

#[test]
fn yuv420_streams_keep_their_layout() {
    // 5x3 luma has 3x2 chroma planes
    let g = FrameGeometry::yuv420(5, 3).unwrap();
    assert_eq!(g.layout(), PlaneLayout::Yuv420);
    assert_eq!(g.sample_len(), 15 + 2 * 6);
    let frames: Vec<Frame> = (0..4u8)
        .map(|k| Frame::new(g, (0..27).map(|i| if i < 10 { k } else { i }).collect()).unwrap())
        .collect();
    let fps = Fps {
        num: 30000,
        den: 1001,
    };
    let mut y4m = Vec::new();
    write_y4m(&mut y4m, g, fps, frames.iter()).unwrap();
    assert!(y4m.starts_with(b"YUV4MPEG2 W5 H3 F30000:1001 C420jpeg\n"));

    let mut container = Vec::new();
    encode_container(
        &mut read_y4m(y4m.as_slice()).unwrap(),
        EncoderConfig::default(),
        &mut container,
    )
    .unwrap();
    let mut sink = CollectSink::default();
    let summary = decode_container(container.as_slice(), &mut sink).unwrap();
    assert_eq!(summary.hello.geometry, g);
    assert_eq!(sink.fps, Some(fps));
    let got: Vec<Frame> = sink.frames.into_iter().map(|(_, f)| f).collect();
    assert_eq!(got, frames);
}

#[test]
fn deltas_are_never_larger_than_a_fresh_reference_on_low_motion_video() {
    for (seed, fill) in [
        (1, FillMode::Constant),
        (2, FillMode::Noise),
        (3, FillMode::Constant),
    ] {
        let params = SynthParams {
            seed,
            fill_mode: fill,
            n_frames: 60,
            ..SynthParams::default()
        };
        let frames = collect_frames(&mut gen_low_motion(params).unwrap()).unwrap();
        for mode_cfg in [EncoderConfig::spatio_temporal(), EncoderConfig::baseline()] {
            for (k, pair) in frames.windows(2).enumerate() {
                let delta = encode_delta(&pair[0], &pair[1], &mode_cfg).unwrap();
                let d = delta_message(k as u32 + 1, &delta).wire_len();
                let r = reference_message(k as u32 + 1, &pair[1]).wire_len();
                assert!(
                    d <= r,
                    "seed {seed} frame {}: delta {d} > reference {r}",
                    k + 1
                );
            }
        }
    }
}

#[test]
fn container_header_layout() {
    let g = FrameGeometry::new(3, 2, 1).unwrap();
    let frames = vec![Frame::filled(g, 7); 3];
    let mut bytes = Vec::new();
    encode_container(
        &mut MemorySource::new(g, Fps { num: 24, den: 1 }, frames),
        EncoderConfig::baseline(),
        &mut bytes,
    )
    .unwrap();
    assert_eq!(&bytes[..5], b"SFIX\x01");
    // Hello: type, length 14, w, h, channels, fps 24/1, flags (baseline)
    assert_eq!(
        &bytes[5..24],
        &[1, 14, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0, 1, 24, 0, 1, 0, 1]
    );
}

fn small_video() -> impl Strategy<Value = (FrameGeometry, Vec<Frame>)> {
    (
        1u32..12,
        1u32..12,
        prop_oneof![Just(1u8), Just(3u8)],
        0usize..5,
    )
        .prop_flat_map(|(w, h, c, n)| {
            let g = FrameGeometry::new(w, h, c).unwrap();
            let len = g.sample_len();
            (
                Just(g),
                prop::collection::vec(
                    prop::collection::vec(prop::sample::select(vec![0u8, 1, 2, 200]), len),
                    n,
                ),
            )
        })
        .prop_map(|(g, raw)| {
            (
                g,
                raw.into_iter().map(|s| Frame::new(g, s).unwrap()).collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mono_y4m_round_trip((g, frames) in small_video().prop_filter("mono", |(g, _)| g.channels() == 1)) {
        let mut bytes = Vec::new();
        write_y4m(&mut bytes, g, Fps { num: 25, den: 2 }, frames.iter()).unwrap();
        let mut r = read_y4m(bytes.as_slice()).unwrap();
        prop_assert_eq!(r.fps(), Fps { num: 25, den: 2 });
        prop_assert_eq!(collect_frames(&mut r).unwrap(), frames);
    }

    #[test]
    fn container_round_trip((g, frames) in small_video(), baseline in any::<bool>()) {
        let cfg = if baseline { EncoderConfig::baseline() } else { EncoderConfig::spatio_temporal() };
        let mut bytes = Vec::new();
        let enc = encode_container(&mut MemorySource::new(g, Fps { num: 10, den: 1 }, frames.clone()), cfg, &mut bytes).unwrap();
        prop_assert_eq!(enc.wire_bytes as usize, bytes.len());
        let mut sink = CollectSink::default();
        decode_container(bytes.as_slice(), &mut sink).unwrap();
        let got: Vec<Frame> = sink.frames.into_iter().map(|(_, f)| f).collect();
        prop_assert_eq!(got, frames);
    }

    /// Damaged containers are rejected or decode to something; they never panic.
    #[test]
    fn corrupt_containers_fail_cleanly((g, frames) in small_video(), flips in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..4)) {
        let mut bytes = Vec::new();
        encode_container(&mut MemorySource::new(g, Fps { num: 10, den: 1 }, frames), EncoderConfig::default(), &mut bytes).unwrap();
        for (at, v) in flips {
            let i = at.index(bytes.len());
            bytes[i] ^= v | 1;
        }
        let _ = decode_container(bytes.as_slice(), &mut CollectSink::default());
    }
}

import { describe, expect, it } from "vitest";
import { MAX_SPEED, MIN_SPEED, ReplayClock } from "../src/playback.js";

describe("ReplayClock construction", () => {
  it("starts paused at frame 0 over the whole clip", () => {
    const clock = new ReplayClock(21, 50);
    expect(clock.playing).toBe(false);
    expect(clock.frame).toBe(0);
    expect(clock.speed).toBe(1);
    expect(clock.range).toEqual([0, 20]);
    expect(clock.loopRange).toBeNull();
  });

  it("rejects empty clips and bad sample rates", () => {
    expect(() => new ReplayClock(0, 50)).toThrow(RangeError);
    expect(() => new ReplayClock(2.5, 50)).toThrow(RangeError);
    expect(() => new ReplayClock(10, 0)).toThrow(RangeError);
    expect(() => new ReplayClock(10, Number.NaN)).toThrow(RangeError);
  });
});

describe("speed control", () => {
  it("clamps to the supported 0.1x..1x band", () => {
    const clock = new ReplayClock(21, 50);
    clock.setSpeed(0.01);
    expect(clock.speed).toBe(MIN_SPEED);
    clock.setSpeed(3);
    expect(clock.speed).toBe(MAX_SPEED);
    clock.setSpeed(0.5);
    expect(clock.speed).toBe(0.5);
  });

  it("rejects non-finite speeds", () => {
    const clock = new ReplayClock(21, 50);
    expect(() => clock.setSpeed(Number.NaN)).toThrow(RangeError);
    expect(() => clock.setSpeed(Infinity)).toThrow(RangeError);
  });
});

describe("advancing", () => {
  it("does not move while paused", () => {
    const clock = new ReplayClock(21, 50);
    expect(clock.advance(1.0)).toBe(0);
    expect(clock.frame).toBe(0);
  });

  it("moves through frames at the sample rate", () => {
    const clock = new ReplayClock(21, 50);
    clock.play();
    clock.advance(0.045); // 2.25 frames at 50 Hz
    expect(clock.frame).toBe(2);
    clock.advance(0.015); // cursor 3.0
    expect(clock.frame).toBe(3);
  });

  it("scales frame progress by the playback speed", () => {
    const clock = new ReplayClock(21, 50);
    clock.setSpeed(0.5);
    clock.play();
    clock.advance(0.2); // 0.2 s * 50 Hz * 0.5 = 5 frames
    expect(clock.frame).toBe(5);
  });

  it("wraps at the end of the clip", () => {
    const clock = new ReplayClock(10, 10);
    clock.play();
    clock.advance(0.95); // 9.5 frames
    expect(clock.frame).toBe(9);
    clock.advance(0.1); // 10.5 -> wraps to 0.5
    expect(clock.frame).toBe(0);
  });

  it("survives a huge wall-clock gap", () => {
    const clock = new ReplayClock(10, 10);
    clock.play();
    clock.advance(3600);
    const [start, end] = clock.range;
    expect(clock.frame).toBeGreaterThanOrEqual(start);
    expect(clock.frame).toBeLessThanOrEqual(end);
  });

  it("ignores zero, negative, and non-finite deltas", () => {
    const clock = new ReplayClock(10, 10);
    clock.play();
    clock.advance(0.25);
    const frame = clock.frame;
    clock.advance(0);
    clock.advance(-5);
    clock.advance(Number.NaN);
    expect(clock.frame).toBe(frame);
  });

  it("half speed doubles the wall-clock time for one pass, within one frame", () => {
    const timeForOnePass = (speed: number): number => {
      const clock = new ReplayClock(20, 10);
      clock.setSpeed(speed);
      clock.play();
      let elapsed = 0;
      let sawLast = false;
      const dt = 0.004;
      for (let i = 0; i < 500_000; i++) {
        clock.advance(dt);
        elapsed += dt;
        if (clock.frame === 19) {
          sawLast = true;
        }
        if (sawLast && clock.frame === 0) {
          return elapsed;
        }
      }
      throw new Error("clip never wrapped");
    };
    const fullSpeed = timeForOnePass(1.0);
    const halfSpeed = timeForOnePass(0.5);
    expect(fullSpeed).toBeCloseTo(2.0, 1);
    const framePeriodAtHalf = 1 / (10 * 0.5);
    expect(Math.abs(halfSpeed - 2 * fullSpeed)).toBeLessThanOrEqual(framePeriodAtHalf);
  });
});

describe("A-B loop", () => {
  it("never shows a frame outside the loop", () => {
    const clock = new ReplayClock(30, 50);
    clock.setLoop(5, 14);
    clock.play();
    const dts = [0.004, 0.016, 0.033, 0.1, 0.25, 0.007];
    for (let i = 0; i < 2000; i++) {
      clock.advance(dts[i % dts.length]);
      expect(clock.frame).toBeGreaterThanOrEqual(5);
      expect(clock.frame).toBeLessThanOrEqual(14);
    }
  });

  it("snaps the cursor into the loop when it starts outside", () => {
    const clock = new ReplayClock(30, 50);
    clock.seek(25);
    clock.setLoop(5, 14);
    expect(clock.frame).toBe(5);
  });

  it("keeps the cursor where it is when already inside the loop", () => {
    const clock = new ReplayClock(30, 50);
    clock.seek(9);
    clock.setLoop(5, 14);
    expect(clock.frame).toBe(9);
  });

  it("rejects loops outside the clip and keeps the previous state", () => {
    const clock = new ReplayClock(30, 50);
    clock.setLoop(5, 14);
    expect(() => clock.setLoop(5, 30)).toThrow(RangeError);
    expect(() => clock.setLoop(-1, 10)).toThrow(/outside clip frames 0\.\.29/);
    expect(() => clock.setLoop(14, 5)).toThrow(RangeError);
    expect(() => clock.setLoop(1.5, 10)).toThrow(/integers/);
    expect(clock.loopRange).toEqual([5, 14]);
  });

  it("clearing the loop restores the full range", () => {
    const clock = new ReplayClock(30, 50);
    clock.setLoop(5, 14);
    clock.clearLoop();
    expect(clock.range).toEqual([0, 29]);
    expect(clock.loopRange).toBeNull();
  });
});

describe("scrubbing and stepping", () => {
  it("seeks to exact frames, clamped into the active range", () => {
    const clock = new ReplayClock(30, 50);
    clock.seek(12);
    expect(clock.frame).toBe(12);
    clock.seek(-4);
    expect(clock.frame).toBe(0);
    clock.seek(99);
    expect(clock.frame).toBe(29);
    clock.setLoop(5, 14);
    clock.seek(2);
    expect(clock.frame).toBe(5);
    clock.seek(20);
    expect(clock.frame).toBe(14);
  });

  it("seeking keeps the play state", () => {
    const clock = new ReplayClock(30, 50);
    clock.play();
    clock.seek(7);
    expect(clock.playing).toBe(true);
    expect(clock.frame).toBe(7);
  });

  it("stepping pauses and moves exactly one frame", () => {
    const clock = new ReplayClock(30, 50);
    clock.play();
    clock.step(1);
    expect(clock.playing).toBe(false);
    expect(clock.frame).toBe(1);
    clock.step(-1);
    expect(clock.frame).toBe(0);
  });

  it("stepping wraps within the active range", () => {
    const clock = new ReplayClock(30, 50);
    clock.step(-1);
    expect(clock.frame).toBe(29);
    clock.setLoop(5, 14);
    clock.seek(14);
    clock.step(1);
    expect(clock.frame).toBe(5);
    clock.step(-1);
    expect(clock.frame).toBe(14);
  });

  it("rejects fractional steps and non-finite seeks", () => {
    const clock = new ReplayClock(30, 50);
    expect(() => clock.step(0.5)).toThrow(RangeError);
    expect(() => clock.seek(Number.NaN)).toThrow(RangeError);
  });

  it("the reported frame is always an integer inside the active range", () => {
    const clock = new ReplayClock(17, 60);
    clock.play();
    clock.setSpeed(0.35);
    const dts = [0.004, 0.019, 0.031, 0.27];
    for (let i = 0; i < 1000; i++) {
      clock.advance(dts[i % dts.length]);
      if (i === 300) clock.setLoop(3, 11);
      if (i === 600) clock.clearLoop();
      if (i === 800) clock.step(1);
      const [start, end] = clock.range;
      expect(Number.isInteger(clock.frame)).toBe(true);
      expect(clock.frame).toBeGreaterThanOrEqual(start);
      expect(clock.frame).toBeLessThanOrEqual(end);
      if (i === 800) clock.play();
    }
  });
});

export const MIN_SPEED = 0.1;
export const MAX_SPEED = 1.0;

/**
 * Frame clock for clip replay.
 *
 * Holds a fractional frame cursor advanced by wall-clock deltas; the visible
 * frame is always the floor of that cursor, so scrubbing and stepping land on
 * exact frames. An A-B loop narrows the active range and the cursor is kept
 * inside the active range at all times, so no frame outside the loop is ever
 * the current one.
 */
export class ReplayClock {
  readonly frameCount: number;
  readonly sampleRateHz: number;

  playing = false;
  private rate = MAX_SPEED;
  private cursor = 0;
  private loop: { start: number; end: number } | null = null;

  constructor(frameCount: number, sampleRateHz: number) {
    if (!Number.isInteger(frameCount) || frameCount < 1) {
      throw new RangeError(`frame count must be a positive integer, got ${frameCount}`);
    }
    if (!Number.isFinite(sampleRateHz) || sampleRateHz <= 0) {
      throw new RangeError(`sample rate must be a positive number, got ${sampleRateHz}`);
    }
    this.frameCount = frameCount;
    this.sampleRateHz = sampleRateHz;
  }

  /** Current frame index; always an integer inside the active range. */
  get frame(): number {
    return Math.floor(this.cursor);
  }

  get speed(): number {
    return this.rate;
  }

  /** Active [first, last] frame range: the A-B loop if set, else the whole clip. */
  get range(): [number, number] {
    return this.loop ? [this.loop.start, this.loop.end] : [0, this.frameCount - 1];
  }

  get loopRange(): [number, number] | null {
    return this.loop ? [this.loop.start, this.loop.end] : null;
  }

  play(): void {
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  toggle(): void {
    this.playing = !this.playing;
  }

  /** Set the playback rate, clamped to the supported 0.1x..1x band. */
  setSpeed(speed: number): void {
    if (!Number.isFinite(speed)) {
      throw new RangeError(`speed must be a finite number, got ${speed}`);
    }
    this.rate = Math.min(MAX_SPEED, Math.max(MIN_SPEED, speed));
  }

  setLoop(start: number, end: number): void {
    if (!Number.isInteger(start) || !Number.isInteger(end)) {
      throw new RangeError(`loop bounds must be integers, got [${start}, ${end}]`);
    }
    if (start < 0 || end < start || end >= this.frameCount) {
      throw new RangeError(
        `loop [${start}, ${end}] is outside clip frames 0..${this.frameCount - 1}`
      );
    }
    this.loop = { start, end };
    this.clampCursor();
  }

  clearLoop(): void {
    this.loop = null;
  }

  /** Jump to an exact frame, clamped into the active range. Keeps play state. */
  seek(frame: number): void {
    if (!Number.isFinite(frame)) {
      throw new RangeError(`seek target must be a finite number, got ${frame}`);
    }
    const [start, end] = this.range;
    this.cursor = Math.min(end, Math.max(start, Math.floor(frame)));
  }

  /** Pause and move a whole number of frames, wrapping within the active range. */
  step(delta: number): void {
    if (!Number.isInteger(delta)) {
      throw new RangeError(`step must be an integer, got ${delta}`);
    }
    this.playing = false;
    const [start, end] = this.range;
    const span = end - start + 1;
    const offset = (((this.frame - start + delta) % span) + span) % span;
    this.cursor = start + offset;
  }

  /**
   * Advance by a wall-clock delta (seconds) when playing, wrapping within the
   * active range. Returns the frame to render.
   */
  advance(dtSeconds: number): number {
    if (this.playing && Number.isFinite(dtSeconds) && dtSeconds > 0) {
      const [start, end] = this.range;
      const span = end - start + 1;
      const moved = this.cursor - start + dtSeconds * this.sampleRateHz * this.rate;
      this.cursor = start + (moved % span);
    }
    return this.frame;
  }

  private clampCursor(): void {
    const [start, end] = this.range;
    if (this.cursor < start || this.cursor >= end + 1) {
      this.cursor = start;
    }
  }
}

import type { DrawContext } from "../src/renderer.js";

/** A JSON-shaped bundle like the pipeline exports; tests poke holes in copies. */
export function validBundleData(): Record<string, unknown> {
  return {
    format: "swing-viewer-bundle/1",
    clip_id: "s01",
    sample_rate_hz: 50.0,
    markers: ["head", "hip", "hand", "r1", "r2"],
    connectivity: [
      ["head", "hip"],
      ["hip", "hand"],
      ["hand", "r1"],
      ["hand", "r2"],
    ],
    frames: [
      [[0, 0, 1.7], [0, 0, 1.0], [0.3, 0.1, 1.2], [0.5, 0.1, 1.3], [0.5, -0.1, 1.3]],
      [[0.1, 0, 1.7], [0.1, 0, 1.0], [0.4, 0.1, 1.2], [0.6, 0.1, 1.3], [0.6, -0.1, 1.3]],
      [[0.2, 0, 1.7], [0.2, 0, 1.0], [0.5, 0.1, 1.2], [0.7, 0.1, 1.3], [0.7, -0.1, 1.3]],
      [[0.3, 0, 1.7], [0.3, 0, 1.0], [0.6, 0.1, 1.2], [0.8, 0.1, 1.3], [0.8, -0.1, 1.3]],
      [[0.4, 0, 1.7], [0.4, 0, 1.0], [0.7, 0.1, 1.2], [0.9, 0.1, 1.3], [0.9, -0.1, 1.3]],
    ],
    roi: { start_frame: 1, end_frame: 3 },
    labels: [
      { criterion: "novice", label: "good" },
      { criterion: "intermediate", label: "bad" },
    ],
    kinematics: {
      start_frame: 1,
      positions: [[0.6, 0.1, 1.3], [0.7, 0.1, 1.3], [0.8, 0.1, 1.3]],
      vectors: [[0.1, 0.0, 0.0], [0.1, 0.0, 0.0], [0.1, 0.0, 0.0]],
      tips: [[0.7, 0.1, 1.3], [0.8, 0.1, 1.3], [0.9, 0.1, 1.3]],
    },
  };
}

export interface RecordedSegment {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface RecordedDot {
  x: number;
  y: number;
  radius: number;
}

/**
 * DrawContext stub that records what was drawn: every two-point path stroked
 * after moveTo/lineTo, and every filled arc.
 */
export class RecordingContext implements DrawContext {
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;

  segments: RecordedSegment[] = [];
  dots: RecordedDot[] = [];
  saveCount = 0;
  restoreCount = 0;

  private path: Array<[number, number]> = [];
  private pendingArc: RecordedDot | null = null;

  save(): void {
    this.saveCount += 1;
  }

  restore(): void {
    this.restoreCount += 1;
  }

  beginPath(): void {
    this.path = [];
    this.pendingArc = null;
  }

  moveTo(x: number, y: number): void {
    this.path.push([x, y]);
  }

  lineTo(x: number, y: number): void {
    this.path.push([x, y]);
  }

  stroke(): void {
    for (let i = 1; i < this.path.length; i++) {
      const [x0, y0] = this.path[i - 1];
      const [x1, y1] = this.path[i];
      this.segments.push({ x0, y0, x1, y1 });
    }
  }

  arc(x: number, y: number, radius: number): void {
    this.pendingArc = { x, y, radius };
  }

  fill(): void {
    if (this.pendingArc !== null) {
      this.dots.push(this.pendingArc);
      this.pendingArc = null;
    }
  }
}

import type { KinematicsOverlay, MarkerPoint, Vec3 } from "./bundle.js";
import type { OrbitCamera } from "./camera.js";

/**
 * The slice of CanvasRenderingContext2D the renderer actually uses, so tests
 * can drive the drawing code with a recording stub instead of a real canvas.
 */
export interface DrawContext {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  save(): void;
  restore(): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, radius: number, startAngle: number, endAngle: number): void;
  fill(): void;
}

export interface DrawStyle {
  boneColor: string;
  boneWidth: number;
  jointColor: string;
  jointRadius: number;
  trailColor: string;
  trailWidth: number;
  flowColor: string;
  flowWidth: number;
  arrowSize: number;
}

export const DEFAULT_STYLE: DrawStyle = {
  boneColor: "#4f8cc9",
  boneWidth: 2,
  jointColor: "#dce6f2",
  jointRadius: 3,
  trailColor: "#c9a84f",
  trailWidth: 1.5,
  flowColor: "#d1604f",
  flowWidth: 1.5,
  arrowSize: 6,
};

export interface FlowSegment {
  from: Vec3;
  to: Vec3;
}

/**
 * The motion-flow overlay as world-space segments: each one starts at the
 * sweet-spot position for a sample and ends exactly at the stored tip point
 * for that sample. The tip coordinates are used as-is, never recomputed.
 */
export function flowSegments(kinematics: KinematicsOverlay): FlowSegment[] {
  return kinematics.positions.map((from, i) => ({ from, to: kinematics.tips[i] }));
}

function presentPoint(point: MarkerPoint): Vec3 | null {
  const [x, y, z] = point;
  if (x === null || y === null || z === null) {
    return null;
  }
  return [x, y, z];
}

function strokeSegment(
  ctx: DrawContext,
  camera: OrbitCamera,
  from: Vec3,
  to: Vec3
): { x0: number; y0: number; x1: number; y1: number } | null {
  const a = camera.project(from);
  const b = camera.project(to);
  if (a === null || b === null) {
    return null;
  }
  ctx.beginPath();
  ctx.moveTo(a.x, a.y);
  ctx.lineTo(b.x, b.y);
  ctx.stroke();
  return { x0: a.x, y0: a.y, x1: b.x, y1: b.y };
}

/**
 * Draw one frame of the clip as a stick figure: a line per connectivity edge
 * and a dot per marker. Edges or joints touching a missing sample are
 * skipped, as is anything behind the camera.
 */
export function drawStickFigure(
  ctx: DrawContext,
  frame: MarkerPoint[],
  markers: string[],
  connectivity: Array<[string, string]>,
  camera: OrbitCamera,
  style: DrawStyle = DEFAULT_STYLE
): void {
  const indexOf = new Map(markers.map((name, i) => [name, i]));
  ctx.save();
  ctx.strokeStyle = style.boneColor;
  ctx.lineWidth = style.boneWidth;
  for (const [nameA, nameB] of connectivity) {
    const a = presentPoint(frame[indexOf.get(nameA)!]);
    const b = presentPoint(frame[indexOf.get(nameB)!]);
    if (a === null || b === null) {
      continue;
    }
    strokeSegment(ctx, camera, a, b);
  }
  ctx.fillStyle = style.jointColor;
  for (const point of frame) {
    const p = presentPoint(point);
    if (p === null) {
      continue;
    }
    const s = camera.project(p);
    if (s === null) {
      continue;
    }
    ctx.beginPath();
    ctx.arc(s.x, s.y, style.jointRadius, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.restore();
}

/** Draw the sweet-spot trajectory as a polyline through the sample positions. */
export function drawSweetSpotTrail(
  ctx: DrawContext,
  kinematics: KinematicsOverlay,
  camera: OrbitCamera,
  style: DrawStyle = DEFAULT_STYLE
): void {
  ctx.save();
  ctx.strokeStyle = style.trailColor;
  ctx.lineWidth = style.trailWidth;
  for (let i = 1; i < kinematics.positions.length; i++) {
    strokeSegment(ctx, camera, kinematics.positions[i - 1], kinematics.positions[i]);
  }
  ctx.restore();
}

/**
 * Draw the motion-flow vectors, one per sample, each running from the
 * sweet-spot position to the stored tip point, with a small arrowhead.
 */
export function drawFlowVectors(
  ctx: DrawContext,
  kinematics: KinematicsOverlay,
  camera: OrbitCamera,
  style: DrawStyle = DEFAULT_STYLE
): void {
  ctx.save();
  ctx.strokeStyle = style.flowColor;
  ctx.lineWidth = style.flowWidth;
  for (const segment of flowSegments(kinematics)) {
    const drawn = strokeSegment(ctx, camera, segment.from, segment.to);
    if (drawn === null) {
      continue;
    }
    const dx = drawn.x1 - drawn.x0;
    const dy = drawn.y1 - drawn.y0;
    const length = Math.hypot(dx, dy);
    if (length < 1e-9) {
      continue;
    }
    const ux = dx / length;
    const uy = dy / length;
    const size = style.arrowSize;
    ctx.beginPath();
    ctx.moveTo(drawn.x1 - size * (ux * 0.866 - uy * 0.5), drawn.y1 - size * (uy * 0.866 + ux * 0.5));
    ctx.lineTo(drawn.x1, drawn.y1);
    ctx.lineTo(drawn.x1 - size * (ux * 0.866 + uy * 0.5), drawn.y1 - size * (uy * 0.866 - ux * 0.5));
    ctx.stroke();
  }
  ctx.restore();
}

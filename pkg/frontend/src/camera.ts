import type { Vec3 } from "./bundle.js";

export interface ScreenPoint {
  x: number;
  y: number;
  /** Distance along the viewing direction; larger is further away. */
  depth: number;
}

const WORLD_UP: Vec3 = [0, 0, 1];

// Stop just short of the poles so the view basis never degenerates.
const PITCH_LIMIT = Math.PI / 2 - 0.01;
const MIN_DISTANCE = 0.05;
const MAX_DISTANCE = 200;
const NEAR_PLANE = 1e-3;

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const length = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / length, v[1] / length, v[2] / length];
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

/**
 * Orbit camera around a target point in the capture frame (Z vertical-up).
 *
 * The camera owns only a viewing transform — yaw, pitch, distance, target —
 * so orbiting or zooming can never change the clip geometry it looks at.
 */
export class OrbitCamera {
  yaw = Math.PI / 4;
  pitch = Math.PI / 8;
  distance = 3;
  target: Vec3 = [0, 0, 0];
  focalLength = 800;
  viewportWidth = 960;
  viewportHeight = 600;

  setViewport(width: number, height: number): void {
    this.viewportWidth = width;
    this.viewportHeight = height;
  }

  orbitBy(deltaYaw: number, deltaPitch: number): void {
    this.yaw += deltaYaw;
    this.pitch = clamp(this.pitch + deltaPitch, -PITCH_LIMIT, PITCH_LIMIT);
  }

  zoomBy(factor: number): void {
    if (!Number.isFinite(factor) || factor <= 0) {
      throw new RangeError(`zoom factor must be a positive number, got ${factor}`);
    }
    this.distance = clamp(this.distance * factor, MIN_DISTANCE, MAX_DISTANCE);
  }

  /** Aim at the centre of an axis-aligned box and back off far enough to see it all. */
  frameBox(min: Vec3, max: Vec3): void {
    this.target = [
      (min[0] + max[0]) / 2,
      (min[1] + max[1]) / 2,
      (min[2] + max[2]) / 2,
    ];
    const radius = Math.hypot(max[0] - min[0], max[1] - min[1], max[2] - min[2]) / 2;
    this.distance = clamp(Math.max(radius * 2.5, 1), MIN_DISTANCE, MAX_DISTANCE);
  }

  eye(): Vec3 {
    const flat = Math.cos(this.pitch) * this.distance;
    return [
      this.target[0] + flat * Math.cos(this.yaw),
      this.target[1] + flat * Math.sin(this.yaw),
      this.target[2] + Math.sin(this.pitch) * this.distance,
    ];
  }

  /** Perspective-project a world point; null when it sits behind the camera. */
  project(point: Vec3): ScreenPoint | null {
    const eye = this.eye();
    const forward = normalize(sub(this.target, eye));
    const right = normalize(cross(forward, WORLD_UP));
    const up = cross(right, forward);
    const v = sub(point, eye);
    const depth = dot(v, forward);
    if (depth < NEAR_PLANE) {
      return null;
    }
    const scale = this.focalLength / depth;
    return {
      x: this.viewportWidth / 2 + scale * dot(v, right),
      y: this.viewportHeight / 2 - scale * dot(v, up),
      depth,
    };
  }
}

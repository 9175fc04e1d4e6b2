export const BUNDLE_FORMAT = "swing-viewer-bundle/1";

export type SwingLabel = "good" | "bad";

export type Vec3 = [number, number, number];

/** One marker sample; a coordinate is null where the capture lost the marker. */
export type MarkerPoint = [number | null, number | null, number | null];

export interface RoiRange {
  startFrame: number;
  endFrame: number;
}

export interface LabelEntry {
  criterion: string;
  label: SwingLabel;
}

export interface KinematicsOverlay {
  startFrame: number;
  positions: Vec3[];
  vectors: Vec3[];
  tips: Vec3[];
}

export interface ViewerBundle {
  clipId: string;
  sampleRateHz: number;
  markers: string[];
  connectivity: Array<[string, string]>;
  frames: MarkerPoint[][];
  roi: RoiRange | null;
  labels: LabelEntry[];
  kinematics: KinematicsOverlay | null;
}

export class BundleSchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BundleSchemaError";
  }
}

function fail(message: string): never {
  throw new BundleSchemaError(message);
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function requireString(value: unknown, field: string): string {
  if (typeof value !== "string" || value.length === 0) {
    fail(`${field} must be a non-empty string`);
  }
  return value;
}

function requireInt(value: unknown, field: string): number {
  if (typeof value !== "number" || !Number.isInteger(value)) {
    fail(`${field} must be an integer`);
  }
  return value;
}

function parseMarkers(value: unknown): string[] {
  if (!Array.isArray(value) || value.length === 0) {
    fail("markers must be a non-empty array of marker names");
  }
  const names = value.map((name, i) => requireString(name, `markers[${i}]`));
  const seen = new Set<string>();
  for (const name of names) {
    if (seen.has(name)) {
      fail(`markers contains duplicate name "${name}"`);
    }
    seen.add(name);
  }
  return names;
}

function parseConnectivity(value: unknown, markers: string[]): Array<[string, string]> {
  if (!Array.isArray(value)) {
    fail("connectivity must be an array of [marker, marker] pairs");
  }
  const known = new Set(markers);
  return value.map((pair, i) => {
    if (!Array.isArray(pair) || pair.length !== 2) {
      fail(`connectivity[${i}] must be a pair of marker names`);
    }
    const a = requireString(pair[0], `connectivity[${i}][0]`);
    const b = requireString(pair[1], `connectivity[${i}][1]`);
    if (!known.has(a)) {
      fail(`connectivity[${i}] references unknown marker "${a}"`);
    }
    if (!known.has(b)) {
      fail(`connectivity[${i}] references unknown marker "${b}"`);
    }
    return [a, b] as [string, string];
  });
}

function parseMarkerPoint(value: unknown, field: string): MarkerPoint {
  if (!Array.isArray(value) || value.length !== 3) {
    fail(`${field} must be an [x, y, z] triple`);
  }
  const coords = value.map((coord, k) => {
    if (coord === null) {
      return null;
    }
    if (typeof coord !== "number" || !Number.isFinite(coord)) {
      fail(`${field}[${k}] must be a finite number or null`);
    }
    return coord;
  });
  return coords as MarkerPoint;
}

function parseFrames(value: unknown, markerCount: number): MarkerPoint[][] {
  if (!Array.isArray(value) || value.length === 0) {
    fail("frames must be a non-empty array");
  }
  return value.map((frame, t) => {
    if (!Array.isArray(frame) || frame.length !== markerCount) {
      fail(`frames[${t}] must list one point per marker (${markerCount} expected)`);
    }
    return frame.map((point, m) => parseMarkerPoint(point, `frames[${t}][${m}]`));
  });
}

function parseRoi(value: unknown, frameCount: number): RoiRange | null {
  if (value === null || value === undefined) {
    return null;
  }
  if (!isRecord(value)) {
    fail("roi must be null or an object with start_frame and end_frame");
  }
  const startFrame = requireInt(value.start_frame, "roi.start_frame");
  const endFrame = requireInt(value.end_frame, "roi.end_frame");
  if (startFrame < 0 || endFrame < startFrame || endFrame >= frameCount) {
    fail(`roi [${startFrame}, ${endFrame}] is outside clip frames 0..${frameCount - 1}`);
  }
  return { startFrame, endFrame };
}

function parseLabels(value: unknown): LabelEntry[] {
  if (value === null || value === undefined) {
    return [];
  }
  if (!Array.isArray(value)) {
    fail("labels must be an array of {criterion, label} entries");
  }
  return value.map((entry, i) => {
    if (!isRecord(entry)) {
      fail(`labels[${i}] must be an object with criterion and label`);
    }
    const criterion = requireString(entry.criterion, `labels[${i}].criterion`);
    const label = entry.label;
    if (label !== "good" && label !== "bad") {
      fail(`labels[${i}].label must be "good" or "bad"`);
    }
    return { criterion, label };
  });
}

function parseVec3List(value: unknown, field: string): Vec3[] {
  if (!Array.isArray(value)) {
    fail(`${field} must be an array of [x, y, z] triples`);
  }
  return value.map((point, i) => {
    if (!Array.isArray(point) || point.length !== 3) {
      fail(`${field}[${i}] must be an [x, y, z] triple`);
    }
    const coords = point.map((coord, k) => {
      if (typeof coord !== "number" || !Number.isFinite(coord)) {
        fail(`${field}[${i}][${k}] must be a finite number`);
      }
      return coord;
    });
    return coords as Vec3;
  });
}

function parseKinematics(value: unknown, frameCount: number): KinematicsOverlay | null {
  if (value === null || value === undefined) {
    return null;
  }
  if (!isRecord(value)) {
    fail("kinematics must be null or an object");
  }
  const startFrame = requireInt(value.start_frame, "kinematics.start_frame");
  const positions = parseVec3List(value.positions, "kinematics.positions");
  const vectors = parseVec3List(value.vectors, "kinematics.vectors");
  const tips = parseVec3List(value.tips, "kinematics.tips");
  if (vectors.length !== positions.length || tips.length !== positions.length) {
    fail(
      "kinematics positions, vectors and tips must have equal lengths, got " +
        `${positions.length}/${vectors.length}/${tips.length}`
    );
  }
  if (positions.length === 0) {
    fail("kinematics must cover at least one frame");
  }
  if (startFrame < 0 || startFrame + positions.length > frameCount) {
    fail(
      `kinematics frames [${startFrame}, ${startFrame + positions.length - 1}] ` +
        `fall outside clip frames 0..${frameCount - 1}`
    );
  }
  return { startFrame, positions, vectors, tips };
}

function deepFreeze<T>(value: T): T {
  if (Array.isArray(value)) {
    for (const item of value) {
      deepFreeze(item);
    }
    Object.freeze(value);
  } else if (typeof value === "object" && value !== null) {
    for (const item of Object.values(value)) {
      deepFreeze(item);
    }
    Object.freeze(value);
  }
  return value;
}

/**
 * Validate a decoded JSON value as a viewer bundle.
 *
 * The returned bundle is deep-frozen: the viewer reads clip geometry but never
 * rewrites it, and freezing turns any accidental mutation into a loud error.
 */
export function parseViewerBundle(data: unknown): ViewerBundle {
  if (!isRecord(data)) {
    fail("bundle must be a JSON object");
  }
  if (data.format !== BUNDLE_FORMAT) {
    fail(`bundle format must be "${BUNDLE_FORMAT}", got ${JSON.stringify(data.format)}`);
  }
  const clipId = requireString(data.clip_id, "clip_id");
  const sampleRateHz = data.sample_rate_hz;
  if (typeof sampleRateHz !== "number" || !Number.isFinite(sampleRateHz) || sampleRateHz <= 0) {
    fail("sample_rate_hz must be a positive number");
  }
  const markers = parseMarkers(data.markers);
  const connectivity = parseConnectivity(data.connectivity, markers);
  const frames = parseFrames(data.frames, markers.length);
  const roi = parseRoi(data.roi, frames.length);
  const labels = parseLabels(data.labels);
  const kinematics = parseKinematics(data.kinematics, frames.length);
  return deepFreeze({
    clipId,
    sampleRateHz,
    markers,
    connectivity,
    frames,
    roi,
    labels,
    kinematics,
  });
}

/** Parse bundle JSON text, folding JSON syntax errors into schema errors. */
export function loadBundleFromText(text: string): ViewerBundle {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (error) {
    fail(`bundle is not valid JSON: ${(error as Error).message}`);
  }
  return parseViewerBundle(data);
}

/** Axis-aligned bounds over every present sample, or null if all are missing. */
export function clipBounds(frames: MarkerPoint[][]): { min: Vec3; max: Vec3 } | null {
  const min: Vec3 = [Infinity, Infinity, Infinity];
  const max: Vec3 = [-Infinity, -Infinity, -Infinity];
  let seen = false;
  for (const frame of frames) {
    for (const point of frame) {
      const [x, y, z] = point;
      if (x === null || y === null || z === null) {
        continue;
      }
      seen = true;
      min[0] = Math.min(min[0], x);
      min[1] = Math.min(min[1], y);
      min[2] = Math.min(min[2], z);
      max[0] = Math.max(max[0], x);
      max[1] = Math.max(max[1], y);
      max[2] = Math.max(max[2], z);
    }
  }
  return seen ? { min, max } : null;
}

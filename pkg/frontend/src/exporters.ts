import type { LabelAssignment, RoiAssignment } from "./annotations.js";

// Quote a CSV field only when it needs it (delimiter, quote, or line break),
// doubling embedded quotes — the same minimal-quoting dialect the pipeline's
// CSV reader and writer use, so a re-import round trip is byte-identical.
function csvField(value: string): string {
  if (/[",\r\n]/.test(value)) {
    return `"${value.replace(/"/g, '""')}"`;
  }
  return value;
}

/**
 * Render label assignments as a labels CSV: a `clip_id,criterion,label`
 * header plus one row per assignment, with CRLF row terminators.
 */
export function labelsCsv(assignments: LabelAssignment[]): string {
  const rows = [["clip_id", "criterion", "label"], ...assignments.map(
    (entry) => [entry.clipId, entry.criterion, entry.label]
  )];
  return rows.map((row) => row.map(csvField).join(",") + "\r\n").join("");
}

/**
 * Render regions of interest as ROI JSON: a single object when there is
 * exactly one region, otherwise a list, pretty-printed with two-space indent
 * and a trailing newline.
 */
export function roiJson(rois: RoiAssignment[]): string {
  // Keys stay in alphabetical order to match the canonical on-disk form.
  const entries = rois.map((roi) => ({
    clip_id: roi.clipId,
    end_frame: roi.endFrame,
    start_frame: roi.startFrame,
  }));
  const payload = entries.length === 1 ? entries[0] : entries;
  return JSON.stringify(payload, null, 2) + "\n";
}

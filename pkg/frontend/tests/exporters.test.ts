import { describe, expect, it } from "vitest";
import { LabelBook, RoiBook } from "../src/annotations.js";
import { labelsCsv, roiJson } from "../src/exporters.js";

describe("labelsCsv", () => {
  it("writes the canonical header and one CRLF row per assignment", () => {
    const book = new LabelBook();
    book.assign("s01", "novice", "bad");
    book.assign("s01", "intermediate", "good");
    expect(labelsCsv(book.all())).toBe(
      "clip_id,criterion,label\r\n" +
        "s01,intermediate,good\r\n" +
        "s01,novice,bad\r\n"
    );
  });

  it("labelling one swing under two criteria yields exactly two rows", () => {
    const book = new LabelBook();
    book.assign("s01", "novice", "bad");
    book.assign("s01", "intermediate", "good");
    const rows = labelsCsv(book.all()).split("\r\n").filter((row) => row !== "");
    expect(rows).toHaveLength(3); // header + two label rows
    expect(rows.slice(1)).toEqual(["s01,intermediate,good", "s01,novice,bad"]);
  });

  it("a relabel exports only the final value", () => {
    const book = new LabelBook();
    book.assign("s01", "novice", "good");
    book.assign("s01", "novice", "bad");
    expect(labelsCsv(book.all())).toBe("clip_id,criterion,label\r\ns01,novice,bad\r\n");
  });

  it("exports an empty book as just the header", () => {
    expect(labelsCsv([])).toBe("clip_id,criterion,label\r\n");
  });

  it("quotes fields that contain delimiters or quotes, doubling quotes", () => {
    const csv = labelsCsv([
      { clipId: "odd,clip", criterion: 'say "when"', label: "good" },
    ]);
    expect(csv).toBe('clip_id,criterion,label\r\n"odd,clip","say ""when""",good\r\n');
  });
});

describe("roiJson", () => {
  it("writes a single region as a bare object with sorted keys", () => {
    const book = new RoiBook();
    book.registerClip("s01", 21);
    book.setRange("s01", 4, 16);
    expect(roiJson(book.all())).toBe(
      '{\n  "clip_id": "s01",\n  "end_frame": 16,\n  "start_frame": 4\n}\n'
    );
  });

  it("writes several regions as a list, ordered by clip id", () => {
    const book = new RoiBook();
    book.registerClip("s02", 21);
    book.registerClip("s01", 21);
    book.setRange("s02", 5, 14);
    book.setRange("s01", 4, 16);
    expect(roiJson(book.all())).toBe(
      "[\n" +
        '  {\n    "clip_id": "s01",\n    "end_frame": 16,\n    "start_frame": 4\n  },\n' +
        '  {\n    "clip_id": "s02",\n    "end_frame": 14,\n    "start_frame": 5\n  }\n' +
        "]\n"
    );
  });

  it("renders frame indices as integers", () => {
    const text = roiJson([{ clipId: "s01", startFrame: 0, endFrame: 12 }]);
    expect(text).toContain('"start_frame": 0');
    expect(text).toContain('"end_frame": 12');
    expect(text).not.toMatch(/\d\.\d/);
  });

  it("export, re-import, re-export is byte-identical", () => {
    const book = new RoiBook();
    book.registerClip("s01", 21);
    book.registerClip("s02", 21);
    book.setRange("s01", 4, 16);
    book.setRange("s02", 5, 14);
    const exported = roiJson(book.all());

    const parsed = JSON.parse(exported) as Array<{
      clip_id: string;
      start_frame: number;
      end_frame: number;
    }>;
    const reimported = new RoiBook();
    for (const entry of parsed) {
      reimported.registerClip(entry.clip_id, 21);
      reimported.setRange(entry.clip_id, entry.start_frame, entry.end_frame);
    }
    expect(roiJson(reimported.all())).toBe(exported);
  });
});

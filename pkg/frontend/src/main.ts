import { clipBounds, loadBundleFromText, BundleSchemaError, type ViewerBundle } from "./bundle.js";
import { OrbitCamera } from "./camera.js";
import { ReplayClock, MIN_SPEED, MAX_SPEED } from "./playback.js";
import { LabelBook, RoiBook } from "./annotations.js";
import { labelsCsv, roiJson } from "./exporters.js";
import {
  drawStickFigure,
  drawSweetSpotTrail,
  drawFlowVectors,
  DEFAULT_STYLE,
} from "./renderer.js";

function mustGet<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing #${id} element`);
  }
  return element as T;
}

const canvas = mustGet<HTMLCanvasElement>("stage");
const ctx = canvas.getContext("2d")!;
const statusLine = mustGet<HTMLElement>("status");
const frameReadout = mustGet<HTMLElement>("frame-readout");
const clipReadout = mustGet<HTMLElement>("clip-readout");
const fileInput = mustGet<HTMLInputElement>("bundle-file");
const playButton = mustGet<HTMLButtonElement>("play");
const stepBackButton = mustGet<HTMLButtonElement>("step-back");
const stepForwardButton = mustGet<HTMLButtonElement>("step-forward");
const speedSlider = mustGet<HTMLInputElement>("speed");
const speedReadout = mustGet<HTMLElement>("speed-readout");
const scrubSlider = mustGet<HTMLInputElement>("scrub");
const loopStartInput = mustGet<HTMLInputElement>("loop-start");
const loopEndInput = mustGet<HTMLInputElement>("loop-end");
const loopSetButton = mustGet<HTMLButtonElement>("loop-set");
const loopClearButton = mustGet<HTMLButtonElement>("loop-clear");
const roiStartInput = mustGet<HTMLInputElement>("roi-start");
const roiEndInput = mustGet<HTMLInputElement>("roi-end");
const roiStartHereButton = mustGet<HTMLButtonElement>("roi-start-here");
const roiEndHereButton = mustGet<HTMLButtonElement>("roi-end-here");
const roiApplyButton = mustGet<HTMLButtonElement>("roi-apply");
const roiReadout = mustGet<HTMLElement>("roi-readout");
const criterionInput = mustGet<HTMLInputElement>("criterion");
const labelGoodButton = mustGet<HTMLButtonElement>("label-good");
const labelBadButton = mustGet<HTMLButtonElement>("label-bad");
const labelReadout = mustGet<HTMLElement>("label-readout");
const exportLabelsButton = mustGet<HTMLButtonElement>("export-labels");
const exportRoisButton = mustGet<HTMLButtonElement>("export-rois");
const showTrail = mustGet<HTMLInputElement>("show-trail");
const showFlow = mustGet<HTMLInputElement>("show-flow");

const camera = new OrbitCamera();
camera.setViewport(canvas.width, canvas.height);
const labelBook = new LabelBook();
const roiBook = new RoiBook();

let bundle: ViewerBundle | null = null;
let clock: ReplayClock | null = null;

function setStatus(message: string, isError = false): void {
  statusLine.textContent = message;
  statusLine.classList.toggle("error", isError);
}

function refreshLabelReadout(): void {
  if (bundle === null) {
    labelReadout.textContent = "";
    return;
  }
  const parts = labelBook
    .forClip(bundle.clipId)
    .map((entry) => `${entry.criterion}: ${entry.label}`);
  labelReadout.textContent = parts.length > 0 ? parts.join("  ") : "no labels yet";
}

function refreshRoiReadout(): void {
  if (bundle === null) {
    roiReadout.textContent = "";
    return;
  }
  const roi = roiBook.get(bundle.clipId);
  roiReadout.textContent =
    roi === null ? "no region set" : `region [${roi.startFrame}, ${roi.endFrame}]`;
}

function loadBundle(text: string, sourceName: string): void {
  let next: ViewerBundle;
  try {
    next = loadBundleFromText(text);
  } catch (error) {
    if (error instanceof BundleSchemaError) {
      setStatus(`${sourceName}: ${error.message}`, true);
      return;
    }
    throw error;
  }
  bundle = next;
  clock = new ReplayClock(next.frames.length, next.sampleRateHz);
  roiBook.registerClip(next.clipId, next.frames.length);
  if (next.roi !== null) {
    roiBook.setRange(next.clipId, next.roi.startFrame, next.roi.endFrame);
    roiStartInput.value = String(next.roi.startFrame);
    roiEndInput.value = String(next.roi.endFrame);
  }
  labelBook.seed(next.clipId, next.labels);
  const bounds = clipBounds(next.frames);
  if (bounds !== null) {
    camera.frameBox(bounds.min, bounds.max);
  }
  scrubSlider.min = "0";
  scrubSlider.max = String(next.frames.length - 1);
  scrubSlider.value = "0";
  loopStartInput.value = "";
  loopEndInput.value = "";
  clipReadout.textContent =
    `${next.clipId} — ${next.frames.length} frames @ ${next.sampleRateHz} Hz` +
    (next.kinematics !== null ? ", kinematics overlay available" : "");
  setStatus(`loaded ${next.clipId} from ${sourceName}`);
  refreshLabelReadout();
  refreshRoiReadout();
}

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (file === undefined) {
    return;
  }
  const reader = new FileReader();
  reader.onload = () => loadBundle(String(reader.result), file.name);
  reader.readAsText(file);
});

playButton.addEventListener("click", () => {
  if (clock === null) {
    return;
  }
  clock.toggle();
  playButton.textContent = clock.playing ? "Pause" : "Play";
});

stepBackButton.addEventListener("click", () => {
  clock?.step(-1);
  playButton.textContent = "Play";
});

stepForwardButton.addEventListener("click", () => {
  clock?.step(1);
  playButton.textContent = "Play";
});

speedSlider.min = String(MIN_SPEED);
speedSlider.max = String(MAX_SPEED);
speedSlider.addEventListener("input", () => {
  if (clock === null) {
    return;
  }
  clock.setSpeed(Number(speedSlider.value));
  speedReadout.textContent = `${clock.speed.toFixed(2)}x`;
});

scrubSlider.addEventListener("input", () => {
  clock?.seek(Number(scrubSlider.value));
});

loopSetButton.addEventListener("click", () => {
  if (clock === null) {
    return;
  }
  try {
    clock.setLoop(Number(loopStartInput.value), Number(loopEndInput.value));
    setStatus(`looping frames [${clock.range[0]}, ${clock.range[1]}]`);
  } catch (error) {
    setStatus((error as Error).message, true);
  }
});

loopClearButton.addEventListener("click", () => {
  clock?.clearLoop();
  setStatus("loop cleared");
});

roiStartHereButton.addEventListener("click", () => {
  if (clock !== null) {
    roiStartInput.value = String(clock.frame);
  }
});

roiEndHereButton.addEventListener("click", () => {
  if (clock !== null) {
    roiEndInput.value = String(clock.frame);
  }
});

roiApplyButton.addEventListener("click", () => {
  if (bundle === null) {
    return;
  }
  try {
    roiBook.setRange(bundle.clipId, Number(roiStartInput.value), Number(roiEndInput.value));
    setStatus(`region set for ${bundle.clipId}`);
  } catch (error) {
    setStatus((error as Error).message, true);
  }
  refreshRoiReadout();
});

function assignLabel(label: "good" | "bad"): void {
  if (bundle === null) {
    return;
  }
  const criterion = criterionInput.value.trim();
  try {
    const previous = labelBook.assign(bundle.clipId, criterion, label);
    setStatus(
      previous === null
        ? `${bundle.clipId} labelled ${label} under "${criterion}"`
        : `${bundle.clipId} relabelled ${label} under "${criterion}" (was ${previous})`
    );
  } catch (error) {
    setStatus((error as Error).message, true);
  }
  refreshLabelReadout();
}

labelGoodButton.addEventListener("click", () => assignLabel("good"));
labelBadButton.addEventListener("click", () => assignLabel("bad"));

function download(filename: string, text: string, mimeType: string): void {
  const blob = new Blob([text], { type: mimeType });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

exportLabelsButton.addEventListener("click", () => {
  if (labelBook.size === 0) {
    setStatus("nothing to export: no labels assigned yet", true);
    return;
  }
  download("labels.csv", labelsCsv(labelBook.all()), "text/csv");
  setStatus(`exported ${labelBook.size} label(s)`);
});

exportRoisButton.addEventListener("click", () => {
  if (roiBook.size === 0) {
    setStatus("nothing to export: no regions set yet", true);
    return;
  }
  download("rois.json", roiJson(roiBook.all()), "application/json");
  setStatus(`exported ${roiBook.size} region(s)`);
});

let dragging = false;
let lastX = 0;
let lastY = 0;

canvas.addEventListener("mousedown", (event) => {
  dragging = true;
  lastX = event.clientX;
  lastY = event.clientY;
});

window.addEventListener("mouseup", () => {
  dragging = false;
});

window.addEventListener("mousemove", (event) => {
  if (!dragging) {
    return;
  }
  camera.orbitBy((event.clientX - lastX) * 0.008, (event.clientY - lastY) * 0.008);
  lastX = event.clientX;
  lastY = event.clientY;
});

canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  camera.zoomBy(event.deltaY > 0 ? 1.1 : 1 / 1.1);
});

let lastTick: number | null = null;

function tick(timestamp: number): void {
  const dt = lastTick === null ? 0 : Math.min((timestamp - lastTick) / 1000, 0.25);
  lastTick = timestamp;
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (bundle !== null && clock !== null) {
    const frame = clock.advance(dt);
    drawStickFigure(
      ctx,
      bundle.frames[frame],
      bundle.markers,
      bundle.connectivity,
      camera,
      DEFAULT_STYLE
    );
    if (bundle.kinematics !== null && showTrail.checked) {
      drawSweetSpotTrail(ctx, bundle.kinematics, camera, DEFAULT_STYLE);
    }
    if (bundle.kinematics !== null && showFlow.checked) {
      drawFlowVectors(ctx, bundle.kinematics, camera, DEFAULT_STYLE);
    }
    frameReadout.textContent = `frame ${frame} / ${clock.frameCount - 1}`;
    scrubSlider.value = String(frame);
  } else {
    frameReadout.textContent = "no clip loaded";
  }
  requestAnimationFrame(tick);
}

setStatus("load a viewer bundle (*.viewer.json) to begin");
requestAnimationFrame(tick);

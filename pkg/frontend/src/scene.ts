/**
 * 3D scene: unit bounding cube, axes, and one sphere per wand (blue
 * left, red right). Sphere position/radius come straight from the
 * engine broadcast; inactive wands render at 25% opacity.
 *
 * `sphereAppearance` is the pure part, split out so tests can cover
 * the display mapping without a WebGL context.
 */
import * as THREE from 'three';

import { StateMessage, WandReadout } from './messages';

export const LEFT_COLOR = 0x3366ff;
export const RIGHT_COLOR = 0xff3344;
export const INACTIVE_OPACITY = 0.25;

export interface SphereAppearance {
  position: [number, number, number];
  radius: number;
  color: number;
  opacity: number;
}

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

/** Display mapping for one wand; coordinates clamped into the cube. */
export function sphereAppearance(wand: WandReadout): SphereAppearance {
  return {
    position: [clamp01(wand.x), clamp01(wand.y), clamp01(wand.z)],
    radius: Math.max(wand.radius, 1e-3),
    color: wand.side === 'L' ? LEFT_COLOR : RIGHT_COLOR,
    opacity: wand.active ? 1.0 : INACTIVE_OPACITY,
  };
}

export class SceneView {
  private readonly scene = new THREE.Scene();
  private readonly camera: THREE.PerspectiveCamera;
  private readonly renderer: THREE.WebGLRenderer;
  private readonly spheres = new Map<string, THREE.Mesh>();
  private readonly highlight: THREE.Mesh;
  private orbitTheta = 0.7;
  private orbitPhi = 1.1;

  constructor(private readonly canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(
      45,
      canvas.clientWidth / canvas.clientHeight,
      0.01,
      20,
    );
    this.scene.background = new THREE.Color(0x101018);

    const cube = new THREE.LineSegments(
      new THREE.EdgesGeometry(new THREE.BoxGeometry(1, 1, 1)),
      new THREE.LineBasicMaterial({ color: 0x445566 }),
    );
    cube.position.set(0.5, 0.5, 0.5);
    this.scene.add(cube);
    this.scene.add(new THREE.AxesHelper(1.1));
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.6));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(2, 3, 2);
    this.scene.add(sun);

    for (const side of ['L', 'R'] as const) {
      const mesh = new THREE.Mesh(
        new THREE.SphereGeometry(1, 32, 24),
        new THREE.MeshStandardMaterial({ transparent: true }),
      );
      this.spheres.set(side, mesh);
      this.scene.add(mesh);
    }
    this.highlight = new THREE.Mesh(
      new THREE.SphereGeometry(1, 16, 12),
      new THREE.MeshBasicMaterial({ color: 0xffffff, wireframe: true, transparent: true, opacity: 0.4 }),
    );
    this.highlight.visible = false;
    this.scene.add(this.highlight);

    this.attachOrbitControls();
    this.updateCamera();
  }

  applyState(state: StateMessage): void {
    for (const wand of state.wands) {
      const mesh = this.spheres.get(wand.side);
      if (!mesh) continue;
      const a = sphereAppearance(wand);
      mesh.position.set(...a.position);
      mesh.scale.setScalar(a.radius);
      const mat = mesh.material as THREE.MeshStandardMaterial;
      mat.color.setHex(a.color);
      mat.opacity = a.opacity;
    }
    // intersection highlight at the midpoint when spheres overlap
    if (state.overlap > 0) {
      const [l, r] = state.wands;
      this.highlight.position.set((l.x + r.x) / 2, (l.y + r.y) / 2, (l.z + r.z) / 2);
      this.highlight.scale.setScalar(Math.min(l.radius, r.radius) * state.overlap);
      this.highlight.visible = true;
    } else {
      this.highlight.visible = false;
    }
  }

  setDimmed(dimmed: boolean): void {
    (this.scene.background as THREE.Color).setHex(dimmed ? 0x181818 : 0x101018);
  }

  render(): void {
    const w = this.canvas.clientWidth;
    const h = this.canvas.clientHeight;
    this.camera.aspect = w / h;
    this.camera.updateProjectionMatrix();
    this.renderer.setSize(w, h, false);
    this.renderer.render(this.scene, this.camera);
  }

  /** Fixed orbit around the cube center; drag to rotate. */
  private attachOrbitControls(): void {
    let dragging = false;
    let last = [0, 0];
    this.canvas.addEventListener('pointerdown', (ev) => {
      dragging = true;
      last = [ev.clientX, ev.clientY];
    });
    window.addEventListener('pointerup', () => (dragging = false));
    window.addEventListener('pointermove', (ev) => {
      if (!dragging) return;
      this.orbitTheta -= (ev.clientX - last[0]) * 0.01;
      this.orbitPhi = Math.min(2.6, Math.max(0.4, this.orbitPhi - (ev.clientY - last[1]) * 0.01));
      last = [ev.clientX, ev.clientY];
      this.updateCamera();
    });
  }

  private updateCamera(): void {
    const r = 2.4;
    this.camera.position.set(
      0.5 + r * Math.sin(this.orbitPhi) * Math.cos(this.orbitTheta),
      0.5 + r * Math.cos(this.orbitPhi),
      0.5 + r * Math.sin(this.orbitPhi) * Math.sin(this.orbitTheta),
    );
    this.camera.lookAt(0.5, 0.5, 0.5);
  }
}

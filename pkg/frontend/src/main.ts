import { App } from './app.js';

const root = document.querySelector<HTMLElement>('#app');
if (root !== null) {
  const app = new App(root);
  void app.boot();
}

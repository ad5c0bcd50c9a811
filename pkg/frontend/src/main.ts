import { FeedbackApp, tokenFromLocation } from './app.js';
import { renderFatal } from './render.js';

const root = document.getElementById('app');
if (root) {
  const token = tokenFromLocation(window.location);
  if (!token) {
    renderFatal(root, 'Open this page through your personal feedback link.');
  } else {
    const app = new FeedbackApp(root, '', token);
    void app.load();
  }
}
